use lift_verify::jets::layout;
use lift_verify::Jet;
use proptest::prelude::*;

fn jet_strategy(vars: usize, order: usize) -> impl Strategy<Value = Jet> {
    let len = layout(vars, order).unwrap().len();
    prop::collection::vec(-10.0f64..10.0, len).prop_map(move |c| Jet::from_coeffs(vars, order, c).unwrap())
}

fn triple() -> impl Strategy<Value = (Jet, Jet, Jet)> {
    (1usize..=4, 0usize..=3).prop_flat_map(|(v, k)| (jet_strategy(v, k), jet_strategy(v, k), jet_strategy(v, k)))
}

/// A pair of jets of order ≥ 1 and a variable to differentiate in.
fn differentiable_pair() -> impl Strategy<Value = (Jet, Jet, usize)> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(v, k)| (jet_strategy(v, k), jet_strategy(v, k), 0..v))
}

fn abs(j: &Jet) -> Jet {
    Jet::from_coeffs(j.vars(), j.order(), j.coeffs().iter().map(|c| c.abs()).collect()).unwrap()
}

/// Coefficientwise comparison against a bound on the rounding error.
fn close(x: &Jet, y: &Jet, scale: &Jet) -> Result<(), TestCaseError> {
    for ((a, b), s) in x.coeffs().iter().zip(y.coeffs()).zip(scale.coeffs()) {
        prop_assert!((a - b).abs() <= 1e-12 * s.max(1.0), "{a} vs {b} (scale {s})");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        let scale = &(&abs(&a) * &abs(&b)) * &abs(&c);
        close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), &scale)?;
    }

    #[test]
    fn multiplication_is_commutative((a, b, _c) in triple()) {
        close(&(&a * &b), &(&b * &a), &(&abs(&a) * &abs(&b)))?;
    }

    #[test]
    fn multiplication_distributes((a, b, c) in triple()) {
        let scale = &abs(&a) * &(&abs(&b) + &abs(&c));
        close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), &scale)?;
    }

    #[test]
    fn addition_laws((a, b, c) in triple()) {
        let scale = &(&abs(&a) + &abs(&b)) + &abs(&c);
        close(&(&(&a + &b) + &c), &(&a + &(&b + &c)), &scale)?;
        close(&(&a + &b), &(&b + &a), &scale)?;
        close(&(&(&a - &a) + &b), &b, &scale)?;
    }

    #[test]
    fn one_is_neutral((a, _b, _c) in triple()) {
        let one = a.constant_like(1.0);
        prop_assert_eq!(&(&a * &one), &a);
    }

    #[test]
    fn leibniz_rule((a, b, var) in differentiable_pair()) {
        let lhs = (&a * &b).derivative(var).unwrap();
        let da = a.derivative(var).unwrap();
        let db = b.derivative(var).unwrap();
        let (a1, b1) = (a.truncate(a.order() - 1).unwrap(), b.truncate(b.order() - 1).unwrap());
        let rhs = &(&da * &b1) + &(&a1 * &db);
        let scale = &(&abs(&da) * &abs(&b1)) + &(&abs(&a1) * &abs(&db));
        close(&lhs, &rhs, &scale)?;
    }

    #[test]
    fn division_inverts_multiplication((a, b, _c) in triple()) {
        let b = &b + &b.constant_like(25.0 + b.value().abs());
        let q = &(&a * &b) / &b;
        for (x, y) in q.coeffs().iter().zip(a.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "{x} vs {y}");
        }
    }
}
