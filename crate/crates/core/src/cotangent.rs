//! The induced chart on the cotangent bundle and the lifting operations.
//!
//! Phase-space coordinates are `(x¹…xⁿ, p₁…pₙ)`; jet variable `i < n` is
//! `xⁱ` and variable `n + i` is `p_i`. The canonical forms are
//! `θ = p_i dxⁱ` and `ω = dθ = dp_i ∧ dxⁱ`, so `ω(∂_{p_i}, ∂_{x^j}) = δ_ij`.
//! The complete lift is fixed by `ω(·, cX) = dX̃`, which gives
//! `cX = Xⁱ ∂_{xⁱ} − p_k ∂_i X^k ∂_{p_i}`.

use crate::base_geometry::{FieldRole, FieldSpec, ManifoldSpec};
use crate::error::{Error, Result};
use crate::jets::{Jet, JetError};
use crate::tensor::{self, sum_jets, truncate_all, Tensor2, Tensor3};

/// A point of the cotangent bundle in the induced chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> PhasePoint {
        assert_eq!(q.len(), p.len(), "base and fiber dimensions differ");
        PhasePoint { q, p }
    }

    /// Base dimension `n`.
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// `(q, p)` as one vector of length `2n`.
    pub fn flat(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    /// Seeds all `2n` chart coordinates as jet variables.
    pub fn coords(&self, order: usize) -> Result<Vec<Jet>> {
        Ok(Jet::coordinates(&self.flat(), order)?)
    }

    /// The same base point with momentum scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> PhasePoint {
        PhasePoint {
            q: self.q.clone(),
            p: self.p.iter().map(|v| v * factor).collect(),
        }
    }
}

/// A tangent vector to the cotangent bundle, `(a; b) = aⁱ ∂_{xⁱ} + b_i ∂_{p_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    pub point: PhasePoint,
    pub comps: Vec<f64>,
}

impl PhaseVector {
    pub fn new(point: &PhasePoint, comps: Vec<f64>) -> PhaseVector {
        assert_eq!(comps.len(), 2 * point.dim(), "phase vector length");
        PhaseVector {
            point: point.clone(),
            comps,
        }
    }

    pub fn base_part(&self) -> &[f64] {
        &self.comps[..self.point.dim()]
    }

    pub fn fiber_part(&self) -> &[f64] {
        &self.comps[self.point.dim()..]
    }

    fn check_base(&self, other: &PhaseVector) -> Result<()> {
        if self.point == other.point {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn checked_add(&self, other: &PhaseVector) -> Result<PhaseVector> {
        self.check_base(other)?;
        Ok(PhaseVector::new(
            &self.point,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &PhaseVector) -> Result<PhaseVector> {
        self.check_base(other)?;
        Ok(PhaseVector::new(
            &self.point,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.comps)
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Matrix of `ω` in the basis `(∂_x, ∂_p)`: `[[0, −I], [I, 0]]`.
pub fn omega_matrix(n: usize) -> Tensor2<f64> {
    Tensor2::from_fn(2 * n, |a, b| {
        if a < n && b == a + n {
            -1.0
        } else if a >= n && b + n == a {
            1.0
        } else {
            0.0
        }
    })
}

/// Inverse of [`omega_matrix`]; since `Ω² = −I` it is `−Ω`.
pub fn omega_inverse(n: usize) -> Tensor2<f64> {
    omega_matrix(n).map(|v| -v)
}

/// `ω(v, w)` for component vectors of length `2n`.
pub fn omega(v: &[f64], w: &[f64]) -> f64 {
    let n = v.len() / 2;
    (0..n).map(|i| v[n + i] * w[i] - v[i] * w[n + i]).sum()
}

pub fn theta_at(pt: &PhasePoint) -> Vec<f64> {
    let n = pt.dim();
    pt.p.iter().copied().chain(std::iter::repeat_n(0.0, n)).collect()
}

pub fn omega_at(pt: &PhasePoint) -> Tensor2<f64> {
    omega_matrix(pt.dim())
}

/// `X̃ = p_k X^k`.
pub fn tautological_jets(x: &[Jet], p: &[Jet]) -> Jet {
    let zero = x[0].zero_like();
    sum_jets(&zero, x.len(), |k| &p[k] * &x[k])
}

/// `vα = α_i ∂_{p_i}`.
pub fn vertical_oneform_jets(alpha: &[Jet]) -> Vec<Jet> {
    let zero = alpha[0].zero_like();
    std::iter::repeat_n(zero, alpha.len())
        .chain(alpha.iter().cloned())
        .collect()
}

/// `vT = p_k T^k_l ∂_{p_l}`; `t` is row-major `T^k_l`.
pub fn vertical_tensor_jets(t: &[Jet], p: &[Jet]) -> Vec<Jet> {
    let n = p.len();
    let zero = p[0].zero_like();
    let fiber = (0..n).map(|l| sum_jets(&zero, n, |k| &p[k] * &t[k * n + l]));
    std::iter::repeat_n(zero.clone(), n).chain(fiber).collect()
}

/// `cX = (Xⁱ; −p_k ∂_i X^k)`, one order below `x`.
pub fn complete_lift_jets(x: &[Jet], p: &[Jet]) -> Result<Vec<Jet>> {
    let n = x.len();
    let order = x[0].order();
    if order == 0 {
        return Err(JetError::NothingToDifferentiate.into());
    }
    let xl = truncate_all(x, order - 1)?;
    let pl = truncate_all(p, order - 1)?;
    let zero = xl[0].zero_like();
    let mut out = xl;
    for i in 0..n {
        let mut acc = zero.clone();
        for k in 0..n {
            acc = &acc - &(&pl[k] * &x[k].derivative(i)?);
        }
        out.push(acc);
    }
    Ok(out)
}

/// `hX = (Xⁱ; p_k Γ^k_{im} X^m)` at the order of `gamma`.
pub fn horizontal_lift_jets(x: &[Jet], gamma: &Tensor3<Jet>, p: &[Jet]) -> Result<Vec<Jet>> {
    let n = x.len();
    let order = gamma.get(0, 0, 0).order();
    let xl = truncate_all(x, order)?;
    let pl = truncate_all(p, order)?;
    let zero = xl[0].zero_like();
    let mut fiber = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = zero.clone();
        for k in 0..n {
            let gx = sum_jets(&zero, n, |m| gamma.get(k, i, m) * &xl[m]);
            acc = &acc + &(&pl[k] * &gx);
        }
        fiber.push(acc);
    }
    Ok(xl.into_iter().chain(fiber).collect())
}

/// `ξ = p_i ∂_{p_i}`.
pub fn liouville_jets(p: &[Jet]) -> Vec<Jet> {
    let zero = p[0].zero_like();
    std::iter::repeat_n(zero, p.len()).chain(p.iter().cloned()).collect()
}

/// `K(a; b)_i = b_i − p_k Γ^k_{mi} a^m`.
pub fn connection_map(v: &[f64], gamma: &Tensor3<f64>, p: &[f64]) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let mut k_i = v[n + i];
            for k in 0..n {
                for m in 0..n {
                    k_i -= p[k] * gamma.get(k, m, i) * v[m];
                }
            }
            k_i
        })
        .collect()
}

/// `V f = V^a ∂_a f` at the expansion point.
pub fn directional(f: &Jet, v: &[f64]) -> f64 {
    v.iter().enumerate().map(|(a, va)| va * f.d(a)).sum()
}

/// `d f` as a covector on phase space.
pub fn differential(f: &Jet) -> Vec<f64> {
    (0..f.vars()).map(|a| f.d(a)).collect()
}

fn base_jets(pt: &PhasePoint, order: usize) -> Result<(Vec<Jet>, Vec<Jet>)> {
    let c = pt.coords(order)?;
    let p = c[pt.dim()..].to_vec();
    Ok((c, p))
}

fn phase_vector(pt: &PhasePoint, jets: &[Jet]) -> PhaseVector {
    PhaseVector::new(pt, tensor::values(jets))
}

pub fn tautological_at(x: &FieldSpec, pt: &PhasePoint) -> Result<f64> {
    x.expect(FieldRole::Vector)?;
    let xv = x.eval_values(&pt.q)?;
    Ok(xv.iter().zip(&pt.p).map(|(a, b)| a * b).sum())
}

pub fn vlift_oneform_at(alpha: &FieldSpec, pt: &PhasePoint) -> Result<PhaseVector> {
    alpha.expect(FieldRole::OneForm)?;
    let mut comps = vec![0.0; pt.dim()];
    comps.extend(alpha.eval_values(&pt.q)?);
    Ok(PhaseVector::new(pt, comps))
}

pub fn vlift_tensor_at(t: &FieldSpec, pt: &PhasePoint) -> Result<PhaseVector> {
    t.expect(FieldRole::Tensor11)?;
    let (c, p) = base_jets(pt, 0)?;
    Ok(phase_vector(pt, &vertical_tensor_jets(&t.eval_jets(&c)?, &p)))
}

pub fn complete_lift_at(x: &FieldSpec, pt: &PhasePoint) -> Result<PhaseVector> {
    x.expect(FieldRole::Vector)?;
    let (c, p) = base_jets(pt, 1)?;
    Ok(phase_vector(pt, &complete_lift_jets(&x.eval_jets(&c)?, &p)?))
}

pub fn horizontal_lift_at(m: &ManifoldSpec, x: &FieldSpec, pt: &PhasePoint) -> Result<PhaseVector> {
    x.expect(FieldRole::Vector)?;
    let (c, p) = base_jets(pt, 1)?;
    let gamma = m.christoffel_jets(&c)?;
    Ok(phase_vector(pt, &horizontal_lift_jets(&x.eval_jets(&c)?, &gamma, &p)?))
}

pub fn liouville_at(pt: &PhasePoint) -> PhaseVector {
    let mut comps = vec![0.0; pt.dim()];
    comps.extend(&pt.p);
    PhaseVector::new(pt, comps)
}

pub fn connection_map_at(m: &ManifoldSpec, v: &PhaseVector, pt: &PhasePoint) -> Result<Vec<f64>> {
    if v.point != *pt {
        return Err(Error::BaseMismatch);
    }
    let c = pt.coords(1)?;
    let gamma = m.christoffel_jets(&c)?.values();
    Ok(connection_map(&v.comps, &gamma, &pt.p))
}

/// Pushforward `α′X_q` of `X_q` through the section `q ↦ α(q)`, based at
/// `(q, α(q))`.
pub fn section_pushforward_at(alpha: &FieldSpec, x: &FieldSpec, q: &[f64]) -> Result<PhaseVector> {
    alpha.expect(FieldRole::OneForm)?;
    x.expect(FieldRole::Vector)?;
    let c = Jet::coordinates(q, 1)?;
    let a = alpha.eval_jets(&c)?;
    let xv = x.eval_values(q)?;
    let pt = PhasePoint::new(q.to_vec(), tensor::values(&a));
    let mut comps = xv.clone();
    comps.extend(a.iter().map(|ai| directional(ai, &xv)));
    Ok(PhaseVector::new(&pt, comps))
}

/// A vector field on phase space that can be expanded as jets around any
/// point. Implementations return `2n` component jets of the requested order
/// over the `2n` chart variables.
pub trait PhaseField: Sync {
    fn components(&self, pt: &PhasePoint, order: usize) -> Result<Vec<Jet>>;
}

impl<F> PhaseField for F
where
    F: Fn(&PhasePoint, usize) -> Result<Vec<Jet>> + Sync,
{
    fn components(&self, pt: &PhasePoint, order: usize) -> Result<Vec<Jet>> {
        self(pt, order)
    }
}

/// The lifts as phase fields.
#[derive(Debug, Clone, Copy)]
pub enum Lift<'a> {
    VerticalOneForm(&'a FieldSpec),
    VerticalTensor(&'a FieldSpec),
    Complete(&'a FieldSpec),
    Horizontal(&'a ManifoldSpec, &'a FieldSpec),
    Liouville,
    /// The coordinate field `∂_a`, `a < 2n`.
    Coordinate(usize),
}

impl PhaseField for Lift<'_> {
    fn components(&self, pt: &PhasePoint, order: usize) -> Result<Vec<Jet>> {
        let n = pt.dim();
        match *self {
            Lift::VerticalOneForm(alpha) => {
                alpha.expect(FieldRole::OneForm)?;
                let c = pt.coords(order)?;
                Ok(vertical_oneform_jets(&alpha.eval_jets(&c)?))
            }
            Lift::VerticalTensor(t) => {
                t.expect(FieldRole::Tensor11)?;
                let (c, p) = base_jets(pt, order)?;
                Ok(vertical_tensor_jets(&t.eval_jets(&c)?, &p))
            }
            Lift::Complete(x) => {
                x.expect(FieldRole::Vector)?;
                let (c, p) = base_jets(pt, order + 1)?;
                complete_lift_jets(&x.eval_jets(&c)?, &p)
            }
            Lift::Horizontal(m, x) => {
                x.expect(FieldRole::Vector)?;
                let (c, p) = base_jets(pt, order + 1)?;
                let gamma = m.christoffel_jets(&c)?;
                horizontal_lift_jets(&x.eval_jets(&c)?, &gamma, &p)
            }
            Lift::Liouville => {
                let (_, p) = base_jets(pt, order)?;
                Ok(liouville_jets(&p))
            }
            Lift::Coordinate(a) => {
                if a >= 2 * n {
                    return Err(JetError::IndexOutOfRange { index: a, vars: 2 * n }.into());
                }
                let zero = Jet::constant(2 * n, order, 0.0)?;
                let mut out = vec![zero.clone(); 2 * n];
                out[a] = zero.constant_like(1.0);
                Ok(out)
            }
        }
    }
}

/// Lie bracket `[V, W]` of two phase fields at `pt`.
pub fn phase_bracket_at(v: &dyn PhaseField, w: &dyn PhaseField, pt: &PhasePoint) -> Result<PhaseVector> {
    let vj = v.components(pt, 1)?;
    let wj = w.components(pt, 1)?;
    let b = tensor::lie_bracket(&vj, &wj)?;
    Ok(phase_vector(pt, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_geometry::Interval;
    use crate::catalog;

    fn line() -> ManifoldSpec {
        ManifoldSpec::new("line", &["x"], &[vec!["1".into()]], vec![Interval::new(-3.0, 3.0)]).unwrap()
    }

    #[test]
    fn tautological_values() {
        let flat = catalog::flat2();
        let dx = FieldSpec::new(&flat, "dx", FieldRole::Vector, &["1", "0"]).unwrap();
        let zero = FieldSpec::new(&flat, "0", FieldRole::Vector, &["0", "0"]).unwrap();
        let pt = PhasePoint::new(vec![0.1, 0.2], vec![2.0, 3.0]);
        assert_eq!(tautological_at(&dx, &pt).unwrap(), 2.0);
        assert_eq!(tautological_at(&zero, &pt).unwrap(), 0.0);
        let l = line();
        let euler = FieldSpec::new(&l, "x", FieldRole::Vector, &["x"]).unwrap();
        assert_eq!(
            tautological_at(&euler, &PhasePoint::new(vec![1.5], vec![2.0])).unwrap(),
            3.0
        );
    }

    #[test]
    fn canonical_forms_in_one_dimension() {
        let pt = PhasePoint::new(vec![0.0], vec![5.0]);
        assert_eq!(theta_at(&pt), vec![5.0, 0.0]);
        assert_eq!(omega_at(&pt).as_slice(), &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(omega(&[0.0, 1.0], &[1.0, 0.0]), 1.0);
    }

    #[test]
    fn complete_lift_of_euler_field() {
        let l = line();
        let euler = FieldSpec::new(&l, "x", FieldRole::Vector, &["x"]).unwrap();
        let pt = PhasePoint::new(vec![1.25], vec![-0.5]);
        let c = complete_lift_at(&euler, &pt).unwrap();
        assert_eq!(c.comps, vec![1.25, 0.5]);
        let dx = FieldSpec::new(&l, "d", FieldRole::Vector, &["1"]).unwrap();
        assert_eq!(complete_lift_at(&dx, &pt).unwrap().comps, vec![1.0, 0.0]);
        // (cX)Ỹ with Y = ∂_x is −p
        let cj = Lift::Complete(&euler).components(&pt, 0).unwrap();
        let (coords, p) = base_jets(&pt, 1).unwrap();
        let ytilde = tautological_jets(&dx.eval_jets(&coords).unwrap(), &p);
        assert_eq!(directional(&ytilde, &tensor::values(&cj)), 0.5);
    }

    #[test]
    fn horizontal_lift_on_half_plane() {
        let m = catalog::halfplane2();
        let dx = FieldSpec::new(&m, "dx", FieldRole::Vector, &["1", "0"]).unwrap();
        let pt = PhasePoint::new(vec![0.0, 1.0], vec![2.0, 3.0]);
        let h = horizontal_lift_at(&m, &dx, &pt).unwrap();
        assert!((h.comps[2] - 3.0).abs() < 1e-14);
        assert!((h.comps[3] + 2.0).abs() < 1e-14);
        assert!(max_abs(&connection_map_at(&m, &h, &pt).unwrap()) < 1e-14);
    }

    #[test]
    fn liouville_and_vertical_identity_agree() {
        let flat = catalog::flat2();
        let id = FieldSpec::new(&flat, "id", FieldRole::Tensor11, &["1", "0", "0", "1"]).unwrap();
        let pt = PhasePoint::new(vec![0.0, 0.0], vec![2.0, 3.0]);
        assert_eq!(liouville_at(&pt).comps, vec![0.0, 0.0, 2.0, 3.0]);
        assert_eq!(vlift_tensor_at(&id, &pt).unwrap(), liouville_at(&pt));
    }

    #[test]
    fn brackets_of_simple_fields() {
        let pt = PhasePoint::new(vec![0.3], vec![1.7]);
        let b = phase_bracket_at(&Lift::Coordinate(0), &Lift::Coordinate(1), &pt).unwrap();
        assert_eq!(b.comps, vec![0.0, 0.0]);
        let b = phase_bracket_at(&Lift::Liouville, &Lift::Coordinate(1), &pt).unwrap();
        assert_eq!(b.comps, vec![0.0, -1.0]);
    }

    #[test]
    fn mismatched_base_points() {
        let a = PhaseVector::new(&PhasePoint::new(vec![0.0], vec![1.0]), vec![1.0, 0.0]);
        let b = PhaseVector::new(&PhasePoint::new(vec![0.0], vec![2.0]), vec![1.0, 0.0]);
        assert_eq!(a.checked_add(&b), Err(Error::BaseMismatch));
        let m = line();
        assert_eq!(
            connection_map_at(&m, &a, &PhasePoint::new(vec![0.0], vec![2.0])),
            Err(Error::BaseMismatch)
        );
    }
}
