//! Riemannian data on the base manifold: metric, Levi-Civita connection,
//! curvature and covariant derivatives of fields, all in a single chart.
//!
//! Every quantity is computed from jets, so derivatives are exact up to
//! rounding. Functions with a `_jets` suffix take seeded coordinate jets whose
//! first `n` variables are the base coordinates; the layout may carry further
//! variables (the momenta, on the cotangent bundle).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jets::{Jet, JetError};
use crate::tensor::{self, sum_jets, truncate_all, Tensor2, Tensor3, Tensor4};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn lerp(&self, t: f64) -> f64 {
        self.lo + t * (self.hi - self.lo)
    }
}

/// Default momentum box.
pub const DEFAULT_FIBER: Interval = Interval { lo: -2.0, hi: 2.0 };
/// Momenta closer than this to the zero section are redrawn.
pub const DEFAULT_FIBER_EXCLUSION: f64 = 0.1;

/// A Riemannian manifold given in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    name: String,
    coords: Vec<String>,
    /// Full symmetric `n × n` table of component expressions.
    metric: Vec<Expr>,
    base_box: Vec<Interval>,
    pub fiber: Interval,
    pub fiber_exclusion: f64,
    /// Lower bound on `|∇ᶜ ω|` used as a positive control on curved bases.
    pub not_symplectic_threshold: Option<f64>,
}

impl ManifoldSpec {
    /// Builds a manifold from the upper triangle of its metric, given row by
    /// row: `upper[i]` holds `g_ii, g_i(i+1), …, g_i(n-1)`.
    pub fn new<S: AsRef<str>>(
        name: &str,
        coords: &[S],
        upper: &[Vec<String>],
        base_box: Vec<Interval>,
    ) -> Result<ManifoldSpec> {
        let coords: Vec<String> = coords.iter().map(|c| c.as_ref().to_string()).collect();
        let n = coords.len();
        let invalid = |reason: String| Error::InvalidManifold {
            manifold: name.to_string(),
            reason,
        };
        if n == 0 {
            return Err(invalid("dimension must be at least 1".into()));
        }
        if 2 * n > 16 {
            return Err(invalid(format!("dimension {n} is too large")));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(invalid(format!("duplicate coordinate `{c}`")));
            }
        }
        if upper.len() != n || upper.iter().enumerate().any(|(i, row)| row.len() != n - i) {
            return Err(invalid("metric must list the upper triangle row by row".into()));
        }
        if base_box.len() != n {
            return Err(invalid(format!(
                "expected {n} domain intervals, got {}",
                base_box.len()
            )));
        }
        if let Some(bad) = base_box
            .iter()
            .find(|iv| !(iv.lo < iv.hi) || !iv.lo.is_finite() || !iv.hi.is_finite())
        {
            return Err(invalid(format!("empty domain interval [{}, {}]", bad.lo, bad.hi)));
        }
        let mut metric = vec![Expr::Const(0.0); n * n];
        for (i, row) in upper.iter().enumerate() {
            for (offset, text) in row.iter().enumerate() {
                let j = i + offset;
                let e = parse(text, &coords)?;
                metric[i * n + j] = e.clone();
                metric[j * n + i] = e;
            }
        }
        Ok(ManifoldSpec {
            name: name.to_string(),
            coords,
            metric,
            base_box,
            fiber: DEFAULT_FIBER,
            fiber_exclusion: DEFAULT_FIBER_EXCLUSION,
            not_symplectic_threshold: None,
        })
    }

    pub fn with_fiber(mut self, fiber: Interval, exclusion: f64) -> ManifoldSpec {
        self.fiber = fiber;
        self.fiber_exclusion = exclusion;
        self
    }

    pub fn with_not_symplectic_threshold(mut self, threshold: f64) -> ManifoldSpec {
        self.not_symplectic_threshold = Some(threshold);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn base_box(&self) -> &[Interval] {
        &self.base_box
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        &self.metric[i * self.dim() + j]
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        q.len() == self.dim() && q.iter().zip(&self.base_box).all(|(x, iv)| iv.contains(*x))
    }

    /// Metric components as jets; `coords` must start with the base
    /// coordinates.
    pub fn metric_jets(&self, coords: &[Jet]) -> Result<Tensor2<Jet>> {
        let n = self.dim();
        let base = &coords[..n];
        let mut entries = vec![None; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.metric[i * n + j].eval(base)?;
                entries[j * n + i] = Some(v.clone());
                entries[i * n + j] = Some(v);
            }
        }
        Ok(Tensor2::from_vec(
            n,
            entries.into_iter().map(|e| e.expect("filled")).collect(),
        ))
    }

    /// Plain metric values at `q`.
    pub fn metric_values(&self, q: &[f64]) -> Result<Tensor2<f64>> {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.metric[i * n + j].eval(q)?;
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        Ok(Tensor2::from_vec(n, out))
    }

    /// Rejects `q` unless the metric there is symmetric positive definite.
    pub fn check_positive_definite(&self, q: &[f64]) -> Result<()> {
        let g = self.metric_values(q)?;
        if cholesky(&g).is_none() {
            return Err(Error::NotPositiveDefinite {
                manifold: self.name.clone(),
                point: q.to_vec(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: q.len(),
            });
        }
        if !self.contains(q) {
            return Err(Error::OutOfBox {
                manifold: self.name.clone(),
                point: q.to_vec(),
            });
        }
        Ok(())
    }

    /// Levi-Civita coefficients, one order below `coords`.
    pub fn christoffel_jets(&self, coords: &[Jet]) -> Result<Tensor3<Jet>> {
        let order = coords[0].order();
        if order == 0 {
            return Err(JetError::NothingToDifferentiate.into());
        }
        let g = self.metric_jets(coords)?;
        let low = g.truncate(order - 1)?;
        let inverse = tensor::invert(&low).ok_or_else(|| Error::SingularMetric {
            manifold: self.name.clone(),
            point: coords[..self.dim()].iter().map(Jet::value).collect(),
        })?;
        Ok(tensor::levi_civita(&g, &inverse)?)
    }

    /// Riemann tensor, two orders below `coords`.
    pub fn riemann_jets(&self, coords: &[Jet]) -> Result<Tensor4<Jet>> {
        let gamma = self.christoffel_jets(coords)?;
        Ok(tensor::curvature(&gamma)?)
    }
}

/// Lower Cholesky factor of a symmetric matrix, or `None` if it is not
/// positive definite.
pub fn cholesky(a: &Tensor2<f64>) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            if (a.get(i, j) - a.get(j, i)).abs() > 1e-12 * (1.0 + a.get(i, j).abs()) {
                return None;
            }
            let mut s = *a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// A point of the base inside its sampling box.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePoint(pub Vec<f64>);

impl BasePoint {
    pub fn coords(&self, order: usize) -> Result<Vec<Jet>> {
        Ok(Jet::coordinates(&self.0, order)?)
    }
}

/// Pointwise connection coefficients `Γ^c_{ab}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionValue {
    pub label: String,
    pub coeffs: Tensor3<f64>,
}

impl ConnectionValue {
    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        *self.coeffs.get(c, a, b)
    }

    /// Largest `|Γ^c_{ab} − Γ^c_{ba}|`.
    pub fn torsion_residual(&self) -> f64 {
        let m = self.dim();
        let mut worst = 0.0f64;
        for c in 0..m {
            for a in 0..m {
                for b in 0..a {
                    worst = worst.max((self.get(c, a, b) - self.get(c, b, a)).abs());
                }
            }
        }
        worst
    }
}

/// Pointwise curvature components `R^k_{lij}`: `R(∂_i, ∂_j) ∂_l = R^k_{lij} ∂_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureValue {
    pub label: String,
    pub coeffs: Tensor4<f64>,
}

impl CurvatureValue {
    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        *self.coeffs.get(k, l, i, j)
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let m = self.dim();
        let mut worst = 0.0f64;
        for k in 0..m {
            for l in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        worst = worst.max((self.get(k, l, i, j) + self.get(k, l, j, i)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|R^k_{lij} + R^k_{ijl} + R^k_{jli}|`.
    pub fn bianchi_residual(&self) -> f64 {
        let m = self.dim();
        let mut worst = 0.0f64;
        for k in 0..m {
            for l in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        let s = self.get(k, l, i, j) + self.get(k, i, j, l) + self.get(k, j, l, i);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldRole {
    Scalar,
    Vector,
    OneForm,
    /// `(1,1)`-tensor with components `T^k_l` stored row-major (`k * n + l`).
    Tensor11,
}

impl FieldRole {
    pub fn component_count(self, n: usize) -> usize {
        match self {
            FieldRole::Scalar => 1,
            FieldRole::Vector | FieldRole::OneForm => n,
            FieldRole::Tensor11 => n * n,
        }
    }
}

impl fmt::Display for FieldRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldRole::Scalar => "scalar",
            FieldRole::Vector => "vector",
            FieldRole::OneForm => "1-form",
            FieldRole::Tensor11 => "(1,1)-tensor",
        })
    }
}

/// A field on the base given by component expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub label: String,
    role: FieldRole,
    dim: usize,
    components: Vec<Expr>,
}

impl FieldSpec {
    pub fn new<S: AsRef<str>>(
        manifold: &ManifoldSpec,
        label: &str,
        role: FieldRole,
        components: &[S],
    ) -> Result<FieldSpec> {
        let expected = role.component_count(manifold.dim());
        if components.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: components.len(),
            });
        }
        let components = components
            .iter()
            .map(|c| parse(c.as_ref(), manifold.coords()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FieldSpec {
            label: label.to_string(),
            role,
            dim: manifold.dim(),
            components,
        })
    }

    pub fn role(&self) -> FieldRole {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expect(&self, role: FieldRole) -> Result<&FieldSpec> {
        if self.role == role {
            Ok(self)
        } else {
            Err(Error::RoleMismatch {
                expected: role,
                found: self.role,
            })
        }
    }

    /// Component jets over the base coordinates at the front of `coords`.
    pub fn eval_jets(&self, coords: &[Jet]) -> Result<Vec<Jet>> {
        let base = &coords[..self.dim];
        self.components.iter().map(|c| Ok(c.eval(base)?)).collect()
    }

    pub fn eval_values(&self, q: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| Ok(c.eval(q)?)).collect()
    }
}

/// `(∇X)^k_i = ∂_i X^k + Γ^k_{im} X^m`, so that `(∇X)(Y) = ∇_Y X`.
/// `x` has order `K`, `gamma` order `K − 1`; result has order `K − 1`.
pub fn grad_vector_jets(x: &[Jet], gamma: &Tensor3<Jet>) -> Result<Tensor2<Jet>> {
    let n = x.len();
    let order = gamma.get(0, 0, 0).order();
    let xl = truncate_all(x, order)?;
    let zero = xl[0].zero_like();
    let mut entries = Vec::with_capacity(n * n);
    for k in 0..n {
        for i in 0..n {
            let conn = sum_jets(&zero, n, |m| gamma.get(k, i, m) * &xl[m]);
            entries.push(&x[k].derivative(i)? + &conn);
        }
    }
    Ok(Tensor2::from_vec(n, entries))
}

/// `(∇_X α)_i = X^m (∂_m α_i − Γ^k_{mi} α_k)`; `alpha` of order `K`, `x` and
/// `gamma` of order `K − 1`.
pub fn covariant_oneform_jets(alpha: &[Jet], x: &[Jet], gamma: &Tensor3<Jet>) -> Result<Vec<Jet>> {
    let n = alpha.len();
    let order = gamma.get(0, 0, 0).order();
    let al = truncate_all(alpha, order)?;
    let xl = truncate_all(x, order)?;
    let zero = al[0].zero_like();
    (0..n)
        .map(|i| {
            let mut acc = zero.clone();
            for m in 0..n {
                let conn = sum_jets(&zero, n, |k| gamma.get(k, m, i) * &al[k]);
                acc = &acc + &(&xl[m] * &(&alpha[i].derivative(m)? - &conn));
            }
            Ok(acc)
        })
        .collect()
}

/// `(∇_X Y)^k = X^m ∂_m Y^k + Γ^k_{mj} X^m Y^j`; `y` of order `K`, `x` and
/// `gamma` of order `K − 1`.
pub fn covariant_vector_jets(y: &[Jet], x: &[Jet], gamma: &Tensor3<Jet>) -> Result<Vec<Jet>> {
    let n = y.len();
    let order = gamma.get(0, 0, 0).order();
    let yl = truncate_all(y, order)?;
    let xl = truncate_all(x, order)?;
    let zero = yl[0].zero_like();
    (0..n)
        .map(|k| {
            let mut acc = zero.clone();
            for m in 0..n {
                acc = &acc + &(&xl[m] * &y[k].derivative(m)?);
                for j in 0..n {
                    acc = &acc + &(&(gamma.get(k, m, j) * &xl[m]) * &yl[j]);
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `[X, Y]^k = X^m ∂_m Y^k − Y^m ∂_m X^k`, one order lower.
pub fn bracket_jets(x: &[Jet], y: &[Jet]) -> Result<Vec<Jet>> {
    Ok(tensor::lie_bracket(x, y)?)
}

/// `(∇_X T)^k_l = X^m (∂_m T^k_l + Γ^k_{mr} T^r_l − Γ^r_{ml} T^k_r)` at the
/// expansion point.
pub fn covariant_tensor_values(t: &[Jet], x: &[f64], gamma: &Tensor3<f64>) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            let mut acc = 0.0;
            for m in 0..n {
                let mut inner = t[k * n + l].d(m);
                for r in 0..n {
                    inner += gamma.get(k, m, r) * t[r * n + l].value();
                    inner -= gamma.get(r, m, l) * t[k * n + r].value();
                }
                acc += x[m] * inner;
            }
            out[k * n + l] = acc;
        }
    }
    out
}

pub fn metric_at(m: &ManifoldSpec, q: &BasePoint, order: usize) -> Result<Tensor2<Jet>> {
    m.check_point(&q.0)?;
    m.check_positive_definite(&q.0)?;
    m.metric_jets(&q.coords(order)?)
}

pub fn christoffel_at(m: &ManifoldSpec, q: &BasePoint) -> Result<ConnectionValue> {
    m.check_point(&q.0)?;
    let gamma = m.christoffel_jets(&q.coords(1)?)?;
    Ok(ConnectionValue {
        label: format!("levi-civita[{}] at {:?}", m.name(), q.0),
        coeffs: gamma.values(),
    })
}

pub fn riemann_at(m: &ManifoldSpec, q: &BasePoint) -> Result<CurvatureValue> {
    m.check_point(&q.0)?;
    let r = m.riemann_jets(&q.coords(2)?)?;
    Ok(CurvatureValue {
        label: format!("riemann[{}] at {:?}", m.name(), q.0),
        coeffs: r.values(),
    })
}

/// `g^{lj} R^i_{lij}`.
pub fn scalar_curvature_at(m: &ManifoldSpec, q: &BasePoint) -> Result<f64> {
    let r = riemann_at(m, q)?;
    let g = m.metric_jets(&q.coords(0)?)?;
    let inv = tensor::invert(&g).ok_or_else(|| Error::SingularMetric {
        manifold: m.name().to_string(),
        point: q.0.clone(),
    })?;
    let n = m.dim();
    let mut s = 0.0;
    for l in 0..n {
        for j in 0..n {
            let ginv = inv.get(l, j).value();
            for i in 0..n {
                s += ginv * r.get(i, l, i, j);
            }
        }
    }
    Ok(s)
}

/// Components `(∇X)^k_i` as a table indexed `[k][i]`.
pub fn grad_vector_field_at(m: &ManifoldSpec, x: &FieldSpec, q: &BasePoint) -> Result<Tensor2<f64>> {
    x.expect(FieldRole::Vector)?;
    m.check_point(&q.0)?;
    let c = q.coords(1)?;
    let gamma = m.christoffel_jets(&c)?;
    Ok(grad_vector_jets(&x.eval_jets(&c)?, &gamma)?.values())
}

pub fn covariant_derivative_oneform_at(
    m: &ManifoldSpec,
    alpha: &FieldSpec,
    x: &FieldSpec,
    q: &BasePoint,
) -> Result<Vec<f64>> {
    alpha.expect(FieldRole::OneForm)?;
    x.expect(FieldRole::Vector)?;
    m.check_point(&q.0)?;
    let c = q.coords(1)?;
    let gamma = m.christoffel_jets(&c)?;
    let out = covariant_oneform_jets(&alpha.eval_jets(&c)?, &x.eval_jets(&c)?, &gamma)?;
    Ok(tensor::values(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn metric_values_on_catalog() {
        let flat = catalog::flat2();
        let g = metric_at(&flat, &BasePoint(vec![0.3, -0.4]), 1).unwrap();
        assert_eq!(g.values(), Tensor2::from_vec(2, vec![1.0, 0.0, 0.0, 1.0]));
        let half = catalog::halfplane2();
        let g = metric_at(&half, &BasePoint(vec![0.0, 1.0]), 1).unwrap().values();
        assert_eq!(g.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
        let sphere = catalog::sphere2();
        let g = metric_at(&sphere, &BasePoint(vec![std::f64::consts::FRAC_PI_4, 0.0]), 1)
            .unwrap()
            .values();
        assert!(close(*g.get(0, 0), 1.0) && close(*g.get(1, 1), 0.5) && *g.get(0, 1) == 0.0);
    }

    #[test]
    fn out_of_box_and_indefinite() {
        let half = catalog::halfplane2();
        assert!(matches!(
            metric_at(&half, &BasePoint(vec![0.0, 0.0]), 1),
            Err(Error::OutOfBox { .. })
        ));
        let bad = ManifoldSpec::new("bad", &["x"], &[vec!["x".to_string()]], vec![Interval::new(-1.0, 1.0)]).unwrap();
        assert!(matches!(
            metric_at(&bad, &BasePoint(vec![-0.5]), 1),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn role_mismatch() {
        let flat = catalog::flat2();
        let alpha = FieldSpec::new(&flat, "a", FieldRole::OneForm, &["1", "0"]).unwrap();
        assert!(matches!(
            grad_vector_field_at(&flat, &alpha, &BasePoint(vec![0.0, 0.0])),
            Err(Error::RoleMismatch { .. })
        ));
        assert!(matches!(
            FieldSpec::new(&flat, "x", FieldRole::Vector, &["1"]),
            Err(Error::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn gradient_of_euler_field_in_one_dimension() {
        let line = ManifoldSpec::new("line", &["x"], &[vec!["1".into()]], vec![Interval::new(-2.0, 2.0)]).unwrap();
        let x = FieldSpec::new(&line, "x d/dx", FieldRole::Vector, &["x"]).unwrap();
        let g = grad_vector_field_at(&line, &x, &BasePoint(vec![0.7])).unwrap();
        assert_eq!(g.as_slice(), &[1.0]);
    }
}
