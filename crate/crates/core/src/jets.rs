//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] holds every Taylor coefficient `∂^α f / α!` of a scalar function
//! for multi-indices `|α| ≤ K`, over `d` variables. Coefficients are stored in
//! graded lexicographic order, so truncating to a lower order is a prefix
//! slice. Index and multiplication tables are built once per `(d, K)` and
//! shared read-only between threads.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::scalar::Scalar;

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("variable index {index} out of range for {vars} variables")]
    IndexOutOfRange { index: usize, vars: usize },
    #[error("truncation order {0} is not supported (maximum is {MAX_ORDER})")]
    UnsupportedOrder(usize),
    #[error("a jet needs at least one variable")]
    NoVariables,
    #[error("jet shapes differ: (d={0}, K={1}) vs (d={2}, K={3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("division by a jet whose value is zero")]
    DivisionByZero,
    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("multi-index of order {order} exceeds truncation order {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("multi-index has {found} entries but the jet has {expected} variables")]
    MultiIndexLength { found: usize, expected: usize },
    #[error("cannot differentiate an order-0 jet")]
    NothingToDifferentiate,
    #[error("coefficient table has length {found}, expected {expected}")]
    TableLength { found: usize, expected: usize },
}

/// Precomputed index tables for one `(vars, order)` pair.
#[derive(Debug)]
pub struct JetLayout {
    vars: usize,
    order: usize,
    indices: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// `(i, j, k)`: coefficient `k` of a product receives `a[i] * b[j]`.
    products: Vec<(u16, u16, u16)>,
    /// Per variable: `(dst, src, factor)` entries of the derivative map into
    /// the `(vars, order - 1)` layout.
    derivatives: Vec<Vec<(u16, u16, f64)>>,
}

impl JetLayout {
    fn build(vars: usize, order: usize) -> Self {
        let mut indices = Vec::new();
        for degree in 0..=order {
            let mut current = vec![0u8; vars];
            push_degree(&mut indices, &mut current, 0, degree);
        }
        let lookup: HashMap<Vec<u8>, usize> = indices
            .iter()
            .enumerate()
            .map(|(pos, alpha)| (alpha.clone(), pos))
            .collect();

        let mut products = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            let da = degree_of(a);
            for (j, b) in indices.iter().enumerate() {
                if da + degree_of(b) > order {
                    continue;
                }
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                products.push((i as u16, j as u16, lookup[&sum] as u16));
            }
        }

        let mut derivatives = vec![Vec::new(); vars];
        if order > 0 {
            for (dst, beta) in indices.iter().enumerate() {
                if degree_of(beta) >= order {
                    break;
                }
                for (var, entries) in derivatives.iter_mut().enumerate() {
                    let mut raised = beta.clone();
                    raised[var] += 1;
                    let src = lookup[&raised];
                    entries.push((dst as u16, src as u16, f64::from(raised[var])));
                }
            }
        }

        JetLayout {
            vars,
            order,
            indices,
            lookup,
            products,
            derivatives,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of coefficients, `C(vars + order, order)`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Multi-indices in storage order.
    pub fn multi_indices(&self) -> &[Vec<u8>] {
        &self.indices
    }

    pub fn position(&self, alpha: &[u8]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }
}

fn degree_of(alpha: &[u8]) -> usize {
    alpha.iter().map(|&e| e as usize).sum()
}

fn push_degree(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e as u8;
        push_degree(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

type LayoutCache = Mutex<HashMap<(usize, usize), Arc<JetLayout>>>;

/// Shared layout for `(vars, order)`, built on first use.
pub fn layout(vars: usize, order: usize) -> Result<Arc<JetLayout>, JetError> {
    if vars == 0 {
        return Err(JetError::NoVariables);
    }
    if order > MAX_ORDER {
        return Err(JetError::UnsupportedOrder(order));
    }
    static CACHE: OnceLock<LayoutCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(guard
        .entry((vars, order))
        .or_insert_with(|| Arc::new(JetLayout::build(vars, order)))
        .clone())
}

/// How to seed a fresh jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Constant(f64),
    Variable { index: usize, value: f64 },
}

/// Truncated Taylor expansion of a scalar function.
#[derive(Clone)]
pub struct Jet {
    layout: Arc<JetLayout>,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("vars", &self.layout.vars)
            .field("order", &self.layout.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn seed(seed: Seed, vars: usize, order: usize) -> Result<Jet, JetError> {
        match seed {
            Seed::Constant(c) => Jet::constant(vars, order, c),
            Seed::Variable { index, value } => Jet::variable(vars, order, index, value),
        }
    }

    pub fn constant(vars: usize, order: usize, value: f64) -> Result<Jet, JetError> {
        let layout = layout(vars, order)?;
        Ok(Jet::constant_in(&layout, value))
    }

    pub fn constant_in(layout: &Arc<JetLayout>, value: f64) -> Jet {
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = value;
        Jet {
            layout: layout.clone(),
            coeffs,
        }
    }

    /// The coordinate function `x_index` expanded around `value`.
    pub fn variable(vars: usize, order: usize, index: usize, value: f64) -> Result<Jet, JetError> {
        if index >= vars {
            return Err(JetError::IndexOutOfRange { index, vars });
        }
        let layout = layout(vars, order)?;
        let mut jet = Jet::constant_in(&layout, value);
        if order > 0 {
            // degree-one entries follow the constant term, variable 0 first
            jet.coeffs[1 + index] = 1.0;
        }
        Ok(jet)
    }

    /// Seeds every coordinate of `point` as a variable.
    pub fn coordinates(point: &[f64], order: usize) -> Result<Vec<Jet>, JetError> {
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(point.len(), order, i, v))
            .collect()
    }

    pub fn from_coeffs(vars: usize, order: usize, coeffs: Vec<f64>) -> Result<Jet, JetError> {
        let layout = layout(vars, order)?;
        if coeffs.len() != layout.len() {
            return Err(JetError::TableLength {
                found: coeffs.len(),
                expected: layout.len(),
            });
        }
        Ok(Jet { layout, coeffs })
    }

    pub fn vars(&self) -> usize {
        self.layout.vars
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn layout(&self) -> &Arc<JetLayout> {
        &self.layout
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn same_shape(&self, other: &Jet) -> bool {
        Arc::ptr_eq(&self.layout, &other.layout)
            || (self.layout.vars == other.layout.vars && self.layout.order == other.layout.order)
    }

    fn check_shape(&self, other: &Jet) -> Result<(), JetError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(JetError::ShapeMismatch(
                self.vars(),
                self.order(),
                other.vars(),
                other.order(),
            ))
        }
    }

    fn check_index(&self, alpha: &[u8]) -> Result<usize, JetError> {
        if alpha.len() != self.vars() {
            return Err(JetError::MultiIndexLength {
                found: alpha.len(),
                expected: self.vars(),
            });
        }
        let order = degree_of(alpha);
        if order > self.order() {
            return Err(JetError::OrderTooHigh {
                order,
                max: self.order(),
            });
        }
        Ok(self.layout.lookup[alpha])
    }

    /// Taylor coefficient `∂^α f / α!`.
    pub fn coeff(&self, alpha: &[u8]) -> Result<f64, JetError> {
        Ok(self.coeffs[self.check_index(alpha)?])
    }

    /// The partial derivative `∂^α f` at the expansion point.
    pub fn partial(&self, alpha: &[u8]) -> Result<f64, JetError> {
        let pos = self.check_index(alpha)?;
        let factorial: f64 = alpha.iter().map(|&e| (1..=e as u32).product::<u32>() as f64).product();
        Ok(self.coeffs[pos] * factorial)
    }

    /// First partial derivative in `var` at the expansion point.
    pub fn d(&self, var: usize) -> f64 {
        debug_assert!(self.order() >= 1 && var < self.vars());
        self.coeffs[1 + var]
    }

    /// The jet of `∂f/∂x_var`, one order lower.
    pub fn derivative(&self, var: usize) -> Result<Jet, JetError> {
        if var >= self.vars() {
            return Err(JetError::IndexOutOfRange {
                index: var,
                vars: self.vars(),
            });
        }
        if self.order() == 0 {
            return Err(JetError::NothingToDifferentiate);
        }
        let target = layout(self.vars(), self.order() - 1)?;
        let mut coeffs = vec![0.0; target.len()];
        for &(dst, src, factor) in &self.layout.derivatives[var] {
            coeffs[dst as usize] = factor * self.coeffs[src as usize];
        }
        Ok(Jet { layout: target, coeffs })
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Result<Jet, JetError> {
        if order > self.order() {
            return Err(JetError::OrderTooHigh {
                order,
                max: self.order(),
            });
        }
        if order == self.order() {
            return Ok(self.clone());
        }
        let target = layout(self.vars(), order)?;
        let coeffs = self.coeffs[..target.len()].to_vec();
        Ok(Jet { layout: target, coeffs })
    }

    pub fn constant_like(&self, value: f64) -> Jet {
        Jet::constant_in(&self.layout, value)
    }

    pub fn zero_like(&self) -> Jet {
        self.constant_like(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn checked_add(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.check_shape(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn checked_sub(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.check_shape(rhs)?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    pub fn checked_mul(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.check_shape(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.check_shape(rhs)?;
        Ok(self.mul_unchecked(&rhs.recip()?))
    }

    pub fn scale(&self, factor: f64) -> Jet {
        self.map(|c| c * factor)
    }

    /// `1 / f`.
    pub fn recip(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let r = 1.0 / a;
        Ok(self.compose(&[r, -r * r, r * r * r, -r * r * r * r]))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[s, c, -s / 2.0, -c / 6.0])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose(&[c, -s, -c / 2.0, s / 6.0])
    }

    pub fn tan(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a.cos() == 0.0 {
            return Err(JetError::Domain { func: "tan", value: a });
        }
        let t = a.tan();
        let sec2 = 1.0 + t * t;
        Ok(self.compose(&[t, sec2, t * sec2, sec2 * (1.0 + 3.0 * t * t) / 3.0]))
    }

    pub fn sinh(&self) -> Jet {
        let a = self.value();
        let (s, c) = (a.sinh(), a.cosh());
        self.compose(&[s, c, s / 2.0, c / 6.0])
    }

    pub fn cosh(&self) -> Jet {
        let a = self.value();
        let (s, c) = (a.sinh(), a.cosh());
        self.compose(&[c, s, c / 2.0, s / 6.0])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&[e, e, e / 2.0, e / 6.0])
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain { func: "log", value: a });
        }
        let r = 1.0 / a;
        Ok(self.compose(&[a.ln(), r, -r * r / 2.0, r * r * r / 3.0]))
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain { func: "sqrt", value: a });
        }
        let s = a.sqrt();
        Ok(self.compose(&[s, 0.5 / s, -0.125 / (a * s), 0.0625 / (a * a * s)]))
    }

    /// `f^e` for a real exponent; the base must be positive.
    pub fn powf(&self, e: f64) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain {
                func: "real power",
                value: a,
            });
        }
        let p0 = a.powf(e);
        let c1 = e * p0 / a;
        let c2 = e * (e - 1.0) / 2.0 * p0 / (a * a);
        let c3 = e * (e - 1.0) * (e - 2.0) / 6.0 * p0 / (a * a * a);
        Ok(self.compose(&[p0, c1, c2, c3]))
    }

    /// `f^e` for an integer exponent by repeated squaring.
    pub fn powi(&self, e: i32) -> Result<Jet, JetError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        Ok(crate::scalar::pow_by_squaring(base, e.unsigned_abs()))
    }

    /// Evaluates `Σ_k c_k (f - f(0))^k`, where `c_k` are the univariate
    /// Taylor coefficients of the outer function at `f(0)`.
    fn compose(&self, series: &[f64; 4]) -> Jet {
        let order = self.order();
        let mut shifted = self.clone();
        shifted.coeffs[0] = 0.0;
        let mut acc = self.constant_like(series[order]);
        for k in (0..order).rev() {
            acc = acc.mul_unchecked(&shifted);
            acc.coeffs[0] += series[k];
        }
        acc
    }

    fn mul_unchecked(&self, rhs: &Jet) -> Jet {
        let mut out = vec![0.0; self.coeffs.len()];
        for &(i, j, k) in &self.layout.products {
            out[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        Jet {
            layout: self.layout.clone(),
            coeffs: out,
        }
    }

    fn zip_with(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn expect_shape(&self, rhs: &Jet, op: &str) {
        if let Err(e) = self.check_shape(rhs) {
            panic!("jet {op}: {e}");
        }
    }
}

// The operator impls panic on shape mismatch, like slice indexing does on an
// out-of-range index; use the `checked_*` methods to get a `Result`.

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.expect_shape(rhs, "add");
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.expect_shape(rhs, "sub");
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.expect_shape(rhs, "mul");
        self.mul_unchecked(rhs)
    }
}

impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        match self.checked_div(rhs) {
            Ok(q) => q,
            Err(e) => panic!("jet div: {e}"),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|c| -c)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }
    fn lift_const(&self, c: f64) -> Self {
        self.constant_like(c)
    }
    fn sin(&self) -> Self {
        Jet::sin(self)
    }
    fn cos(&self) -> Self {
        Jet::cos(self)
    }
    fn tan(&self) -> Self {
        Jet::tan(self).expect("tan domain checked by caller")
    }
    fn sinh(&self) -> Self {
        Jet::sinh(self)
    }
    fn cosh(&self) -> Self {
        Jet::cosh(self)
    }
    fn exp(&self) -> Self {
        Jet::exp(self)
    }
    fn ln(&self) -> Self {
        Jet::ln(self).expect("log domain checked by caller")
    }
    fn sqrt(&self) -> Self {
        Jet::sqrt(self).expect("sqrt domain checked by caller")
    }
    fn powf(&self, e: f64) -> Self {
        Jet::powf(self, e).expect("power domain checked by caller")
    }
    fn compatible(&self, other: &Self) -> bool {
        self.same_shape(other)
    }
}

/// Adds jets that share a shape; `None` for an empty iterator.
pub fn sum<'a>(terms: impl IntoIterator<Item = &'a Jet>) -> Option<Jet> {
    let mut iter = terms.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, t| &acc + t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn table_length_is_binomial() {
        for vars in 1..=4 {
            for order in 0..=3 {
                let l = layout(vars, order).unwrap();
                let expected = (1..=order).fold(1usize, |acc, k| acc * (vars + k) / k);
                assert_eq!(l.len(), expected, "d={vars} K={order}");
            }
        }
    }

    #[test]
    fn graded_order_puts_units_after_constant() {
        let l = layout(3, 2).unwrap();
        assert_eq!(l.multi_indices()[0], vec![0, 0, 0]);
        assert_eq!(l.multi_indices()[1], vec![1, 0, 0]);
        assert_eq!(l.multi_indices()[2], vec![0, 1, 0]);
        assert_eq!(l.multi_indices()[3], vec![0, 0, 1]);
        assert_eq!(l.multi_indices()[4], vec![2, 0, 0]);
    }

    #[test]
    fn seeding() {
        let c = Jet::seed(Seed::Constant(2.0), 2, 2).unwrap();
        assert_eq!(c.coeffs(), &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let x = Jet::seed(Seed::Variable { index: 0, value: 1.5 }, 2, 2).unwrap();
        assert_eq!(x.coeff(&[0, 0]).unwrap(), 1.5);
        assert_eq!(x.coeff(&[1, 0]).unwrap(), 1.0);
        assert_eq!(x.coeff(&[0, 1]).unwrap(), 0.0);
        assert_eq!(
            Jet::seed(Seed::Variable { index: 3, value: 0.0 }, 2, 2),
            Err(JetError::IndexOutOfRange { index: 3, vars: 2 })
        );
        assert_eq!(Jet::constant(2, 4, 1.0), Err(JetError::UnsupportedOrder(4)));
    }

    #[test]
    fn product_of_coordinates() {
        let x = Jet::variable(2, 2, 0, 0.7).unwrap();
        let y = Jet::variable(2, 2, 1, -1.3).unwrap();
        let xy = &x * &y;
        assert_eq!(xy.coeff(&[1, 1]).unwrap(), 1.0);
        assert_eq!(xy.partial(&[1, 1]).unwrap(), 1.0);
        assert_eq!(xy.coeff(&[1, 0]).unwrap(), -1.3);
        let s = &x + &y;
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn geometric_series() {
        let x = Jet::variable(1, 3, 0, 0.0).unwrap();
        let one = x.constant_like(1.0);
        let g = &one / &(&one - &x);
        assert_eq!(g.coeffs(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn exp_and_sqrt_series() {
        let x = Jet::variable(1, 3, 0, 0.0).unwrap();
        let e = x.exp();
        assert_eq!(e.coeffs(), &[1.0, 1.0, 0.5, 1.0 / 6.0]);
        let r = Jet::variable(1, 2, 0, 4.0).unwrap().sqrt().unwrap();
        assert_eq!(r.value(), 2.0);
        assert_eq!(r.partial(&[1]).unwrap(), 0.25);
    }

    #[test]
    fn partial_of_constant_vanishes() {
        let c = Jet::constant(3, 3, 5.0).unwrap();
        for alpha in c.layout().multi_indices().iter().skip(1) {
            assert_eq!(c.partial(alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn sin_of_square_second_derivative() {
        let t = Jet::variable(1, 2, 0, 1.0).unwrap();
        let f = (&t * &t).sin();
        let expected = 2.0 * 1f64.cos() - 4.0 * 1f64.sin();
        assert!(close(f.partial(&[2]).unwrap(), expected, 1e-14));
    }

    #[test]
    fn errors() {
        let a = Jet::variable(2, 2, 0, 0.0).unwrap();
        let b = Jet::variable(2, 3, 0, 1.0).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(JetError::ShapeMismatch(2, 2, 2, 3))));
        assert_eq!(a.recip().unwrap_err(), JetError::DivisionByZero);
        assert!(a.ln().is_err());
        assert!(a.sqrt().is_err());
        assert_eq!(
            a.partial(&[2, 1]).unwrap_err(),
            JetError::OrderTooHigh { order: 3, max: 2 }
        );
        assert!(a.partial(&[1]).is_err());
        assert_eq!(
            Jet::constant(2, 0, 1.0).unwrap().derivative(0).unwrap_err(),
            JetError::NothingToDifferentiate
        );
    }

    #[test]
    fn derivative_and_truncate() {
        let x = Jet::variable(2, 3, 0, 2.0).unwrap();
        let y = Jet::variable(2, 3, 1, 3.0).unwrap();
        let f = &(&x * &x) * &y; // x^2 y
        let fx = f.derivative(0).unwrap(); // 2xy
        assert_eq!(fx.order(), 2);
        assert_eq!(fx.value(), 12.0);
        assert_eq!(fx.partial(&[1, 0]).unwrap(), 6.0);
        assert_eq!(fx.partial(&[0, 1]).unwrap(), 4.0);
        assert_eq!(fx.partial(&[1, 1]).unwrap(), 2.0);
        let t = f.truncate(1).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.coeffs(), &f.coeffs()[..3]);
    }

    #[test]
    fn powers() {
        let x = Jet::variable(1, 3, 0, 2.0).unwrap();
        let cube = x.powi(3).unwrap();
        assert_eq!(cube.coeffs(), &[8.0, 12.0, 6.0, 1.0]);
        let inv = x.powi(-2).unwrap();
        assert!(close(inv.partial(&[1]).unwrap(), -2.0 / 8.0, 1e-15));
        let half = x.powf(0.5).unwrap();
        let root = x.sqrt().unwrap();
        for (a, b) in half.coeffs().iter().zip(root.coeffs()) {
            assert!(close(*a, *b, 1e-15));
        }
    }
}
