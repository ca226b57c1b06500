use lift_verify::{parse, Jet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 2] = ["x", "y"];

// Every entry is defined on [0.5, 1.5]².
const CORPUS: &[&str] = &[
    "1",
    "x",
    "-x",
    "x + y",
    "x - y - 1",
    "x - (y - 1)",
    "2*x*y",
    "x / y / 2",
    "x / (y / 2)",
    "x^2",
    "x^-2",
    "(x^2)^3",
    "x^2^3",
    "(-x)^2",
    "-x^2",
    "1 / y^2",
    "sin(x)^2",
    "sin(x^2)",
    "cos(x) * sin(y)",
    "tan(x / 2)",
    "sinh(x) - cosh(y)",
    "exp(-x*y)",
    "log(x + y)",
    "sqrt(x*y)",
    "1 + x^2",
    "(1 + x^2) / (1 + y^2)",
    "exp(sin(x)) * log(1 + y^2)",
    "x^1.5",
    "(x + y)^0.5",
    "2.5e-1 * x",
    "-(x - y) * -(y - x)",
    "3 - -x",
    "x*(y + (x - 1)*(y - 2))",
    "sqrt(1 + sin(x)^2) / cosh(x - y)",
    "((x))",
];

#[test]
fn corpus_is_large_enough() {
    assert!(CORPUS.len() >= 30);
}

#[test]
fn printing_is_a_fixed_point() {
    for src in CORPUS {
        let once = parse(src, &VARS).unwrap().to_string();
        let twice = parse(&once, &VARS).unwrap().to_string();
        assert_eq!(once, twice, "source {src}");
        // printing must not change meaning
        let (a, b) = (parse(src, &VARS).unwrap(), parse(&once, &VARS).unwrap());
        let v = [0.8, 1.3];
        assert_eq!(a.eval(&v).unwrap(), b.eval(&v).unwrap(), "source {src}");
    }
}

#[test]
fn real_and_jet_evaluation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let exprs: Vec<_> = CORPUS.iter().map(|s| parse(s, &VARS).unwrap()).collect();
    for _ in 0..100 {
        let q = [rng.random_range(0.5..1.5), rng.random_range(0.5..1.5)];
        let jets = Jet::coordinates(&q, 2).unwrap();
        for (e, src) in exprs.iter().zip(CORPUS) {
            let real = e.eval(&q).unwrap();
            let jet = e.eval(&jets).unwrap().value();
            assert!(
                (real - jet).abs() <= 1e-12 * real.abs().max(1.0),
                "{src} at {q:?}: {real} vs {jet}"
            );
        }
    }
}
