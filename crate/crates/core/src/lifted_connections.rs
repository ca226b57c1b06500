//! Connections on the cotangent bundle built from the Levi-Civita connection
//! of the base: the Riemann extension metric and its Levi-Civita connection
//! (the complete lift), the BNW connection, and symplectification.
//!
//! All coefficient tables are indexed `[c][a][b]` over the `2n` chart
//! coordinates, `∇_{∂_a} ∂_b = Γ^c_{ab} ∂_c`.

use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use crate::base_geometry::{ConnectionValue, CurvatureValue, ManifoldSpec};
use crate::cotangent::{omega_inverse, omega_matrix, PhasePoint};
use crate::error::{Error, Result};
use crate::jets::{Jet, JetError};
use crate::tensor::{self, sum_jets, Tensor2, Tensor3, Tensor4};

/// Sign applied to the curvature entering the BNW formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureSign {
    #[default]
    Standard,
    Flipped,
}

impl CurvatureSign {
    pub fn factor(self) -> f64 {
        match self {
            CurvatureSign::Standard => 1.0,
            CurvatureSign::Flipped => -1.0,
        }
    }
}

impl fmt::Display for CurvatureSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurvatureSign::Standard => "standard",
            CurvatureSign::Flipped => "flipped",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftedConnection {
    Complete,
    Bnw,
    Symplectified,
}

impl LiftedConnection {
    pub const ALL: [LiftedConnection; 3] = [
        LiftedConnection::Bnw,
        LiftedConnection::Complete,
        LiftedConnection::Symplectified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LiftedConnection::Complete => "complete",
            LiftedConnection::Bnw => "bnw",
            LiftedConnection::Symplectified => "symplectified",
        }
    }
}

impl fmt::Display for LiftedConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn split_order(coords: &[Jet], needed: usize) -> Result<usize> {
    let order = coords[0].order();
    if order < needed {
        return Err(JetError::NothingToDifferentiate.into());
    }
    Ok(order)
}

/// `P_ij = p_k Γ^k_{ij}` at the order of `gamma`.
fn momentum_contraction(gamma: &Tensor3<Jet>, p: &[Jet]) -> Result<Tensor2<Jet>> {
    let n = gamma.dim();
    let order = gamma.get(0, 0, 0).order();
    let p = tensor::truncate_all(p, order)?;
    let zero = p[0].zero_like();
    Ok(Tensor2::from_fn(n, |i, j| {
        sum_jets(&zero, n, |k| &p[k] * gamma.get(k, i, j))
    }))
}

/// Riemann extension `G = [[A, I], [I, 0]]`, `A_ij = −2 p_k Γ^k_{ij}`, one
/// order below `coords`.
pub fn riemann_extension_jets(m: &ManifoldSpec, coords: &[Jet]) -> Result<Tensor2<Jet>> {
    let n = m.dim();
    split_order(coords, 1)?;
    let gamma = m.christoffel_jets(coords)?;
    let a = momentum_contraction(&gamma, &coords[n..])?;
    Ok(extension_from_block(&a, -2.0))
}

/// `[[s·A, I], [I, 0]]`.
fn extension_from_block(a: &Tensor2<Jet>, s: f64) -> Tensor2<Jet> {
    let n = a.dim();
    let zero = a.get(0, 0).zero_like();
    let one = zero.constant_like(1.0);
    Tensor2::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, true) => a.get(r, c).scale(s),
        (true, false) if c - n == r => one.clone(),
        (false, true) if r - n == c => one.clone(),
        _ => zero.clone(),
    })
}

/// `G⁻¹ = [[0, I], [I, −A]]`.
fn extension_inverse(a: &Tensor2<Jet>, s: f64) -> Tensor2<Jet> {
    let n = a.dim();
    let zero = a.get(0, 0).zero_like();
    let one = zero.constant_like(1.0);
    Tensor2::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (false, false) => a.get(r - n, c - n).scale(-s),
        (true, false) if c - n == r => one.clone(),
        (false, true) if r - n == c => one.clone(),
        _ => zero.clone(),
    })
}

pub fn riemann_extension_at(m: &ManifoldSpec, pt: &PhasePoint, order: usize) -> Result<Tensor2<Jet>> {
    m.check_point(&pt.q)?;
    riemann_extension_jets(m, &pt.coords(order + 1)?)
}

/// Levi-Civita connection of the Riemann extension, two orders below
/// `coords`.
pub fn complete_connection_jets(m: &ManifoldSpec, coords: &[Jet]) -> Result<Tensor3<Jet>> {
    let n = m.dim();
    let order = split_order(coords, 2)?;
    let gamma = m.christoffel_jets(coords)?;
    let p = momentum_contraction(&gamma, &coords[n..])?;
    let g = extension_from_block(&p, -2.0);
    let inverse = extension_inverse(&p.truncate(order - 2)?, -2.0);
    Ok(tensor::levi_civita(&g, &inverse)?)
}

/// Expands connection coefficients given in a frame into coordinate
/// coefficients.
///
/// `frame[A][c]` holds the coordinate components of frame vector `e_A`,
/// `coframe[a][A]` its inverse (`∂_a = coframe[a][A] e_A`), and
/// `coeffs[D][A][B]` the frame coefficients `∇_{e_A} e_B = C^D_{AB} e_D`.
/// `frame` and `coframe` have order `L`, `coeffs` order at least `L − 1`;
/// the result has order `L − 1`:
///
/// `Γ^c_{ab} = coframe[a][A] (e_A(coframe[b][D]) + coframe[b][B] C^D_{AB}) frame[D][c]`.
pub fn frame_to_coordinates(
    frame: &Tensor2<Jet>,
    coframe: &Tensor2<Jet>,
    coeffs: &Tensor3<Jet>,
) -> Result<Tensor3<Jet>> {
    let dim = frame.dim();
    let order = frame.get(0, 0).order();
    if order == 0 {
        return Err(JetError::NothingToDifferentiate.into());
    }
    let low = order - 1;
    let frame_l = frame.truncate(low)?;
    let coframe_l = coframe.truncate(low)?;
    let coeffs_l = coeffs.truncate(low)?;
    let zero = frame_l.get(0, 0).zero_like();
    // dco[d][b][D] = ∂_d coframe[b][D]
    let dco: Vec<Tensor2<Jet>> = (0..dim)
        .map(|d| -> Result<_> {
            let entries = coframe.iter().map(|j| j.derivative(d)).collect::<Result<Vec<_>, _>>()?;
            Ok(Tensor2::from_vec(dim, entries))
        })
        .collect::<Result<_>>()?;
    // e_A(coframe[b][D])
    let frame_derivative = |a_frame: usize, b: usize, d_frame: usize| {
        sum_jets(&zero, dim, |d| {
            let f = frame_l.get(a_frame, d);
            if f.is_zero() {
                zero.clone()
            } else {
                f * dco[d].get(b, d_frame)
            }
        })
    };
    let mut inner = vec![zero.clone(); dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            for d_frame in 0..dim {
                let mut acc = zero.clone();
                for a_frame in 0..dim {
                    let w = coframe_l.get(a, a_frame);
                    if w.is_zero() {
                        continue;
                    }
                    let mut term = frame_derivative(a_frame, b, d_frame);
                    for b_frame in 0..dim {
                        let c = coeffs_l.get(d_frame, a_frame, b_frame);
                        if !c.is_zero() {
                            term = &term + &(coframe_l.get(b, b_frame) * c);
                        }
                    }
                    acc = &acc + &(w * &term);
                }
                inner[(a * dim + b) * dim + d_frame] = acc;
            }
        }
    }
    Ok(Tensor3::from_fn(dim, |c, a, b| {
        sum_jets(&zero, dim, |d_frame| {
            let f = frame_l.get(d_frame, c);
            if f.is_zero() {
                zero.clone()
            } else {
                &inner[(a * dim + b) * dim + d_frame] * f
            }
        })
    }))
}

/// The adapted frame `E_i = ∂_{xⁱ} + P_ij ∂_{p_j}`, `F^j = ∂_{p_j}` and its
/// inverse `∂_{xⁱ} = E_i − P_ij F^j`, `∂_{p_j} = F^j`.
fn horizontal_frame(p: &Tensor2<Jet>) -> (Tensor2<Jet>, Tensor2<Jet>) {
    let n = p.dim();
    let zero = p.get(0, 0).zero_like();
    let one = zero.constant_like(1.0);
    let frame = Tensor2::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, true) if r == c => one.clone(),
        (true, false) => p.get(r, c - n).clone(),
        (false, false) if r == c => one.clone(),
        _ => zero.clone(),
    });
    let coframe = Tensor2::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, true) if r == c => one.clone(),
        (true, false) => -p.get(r, c - n),
        (false, false) if r == c => one.clone(),
        _ => zero.clone(),
    });
    (frame, coframe)
}

/// BNW coefficients in the horizontal frame:
/// `∇_{F} · = 0`, `∇_{E_i} F^a = −Γ^a_{ik} F^k`, and
/// `∇_{E_i} E_j = Γ^k_{ij} E_k + W_{ij,l} F^l` with
/// `W_{ij,l} = s p_k (½ R^k_{lij} + ⅙ R^k_{jil} + ⅙ R^k_{ijl})`.
fn bnw_frame_coeffs(
    gamma: &Tensor3<Jet>,
    riemann: &Tensor4<Jet>,
    p: &[Jet],
    sign: CurvatureSign,
) -> Result<Tensor3<Jet>> {
    let n = gamma.dim();
    let order = riemann.get(0, 0, 0, 0).order();
    let gamma = gamma.truncate(order)?;
    let p = tensor::truncate_all(p, order)?;
    let zero = p[0].zero_like();
    let s = sign.factor();
    Ok(Tensor3::from_fn(2 * n, |d, a, b| {
        if a >= n {
            return zero.clone();
        }
        let i = a;
        match (d < n, b < n) {
            (true, true) => gamma.get(d, i, b).clone(),
            (false, true) => {
                let (j, l) = (b, d - n);
                let w = sum_jets(&zero, n, |k| {
                    let r = &(riemann.get(k, l, i, j).scale(0.5) + &riemann.get(k, j, i, l).scale(1.0 / 6.0))
                        + &riemann.get(k, i, j, l).scale(1.0 / 6.0);
                    &p[k] * &r
                });
                w.scale(s)
            }
            (false, false) => -gamma.get(b - n, i, d - n),
            (true, false) => zero.clone(),
        }
    }))
}

/// BNW connection in coordinates, two orders below `coords`.
pub fn bnw_connection_jets(m: &ManifoldSpec, coords: &[Jet], sign: CurvatureSign) -> Result<Tensor3<Jet>> {
    let n = m.dim();
    split_order(coords, 2)?;
    let gamma = m.christoffel_jets(coords)?;
    let riemann = tensor::curvature(&gamma)?;
    let p = momentum_contraction(&gamma, &coords[n..])?;
    let (frame, coframe) = horizontal_frame(&p);
    let coeffs = bnw_frame_coeffs(&gamma, &riemann, &coords[n..], sign)?;
    frame_to_coordinates(&frame, &coframe, &coeffs)
}

/// `N^e_{ab}` defined by `ω(N(∂_a, ∂_b), ∂_c) = (∇_a ω)_{bc}`, for any
/// coefficient ring.
pub fn n_tensor_generic<S>(gamma: &Tensor3<S>, zero: &S) -> Tensor3<S>
where
    S: Clone + Add<Output = S> + Mul<f64, Output = S>,
{
    let m = gamma.dim();
    let om = omega_matrix(m / 2);
    let om_inv = omega_inverse(m / 2);
    // s[a][b][c] = (∇_a ω)_{bc} = −Γ^d_{ab} ω_{dc} − Γ^d_{ac} ω_{bd}
    let s = Tensor3::from_fn(m, |a, b, c| {
        let mut acc = zero.clone();
        for d in 0..m {
            let w = *om.get(d, c);
            if w != 0.0 {
                acc = acc + gamma.get(d, a, b).clone() * (-w);
            }
            let w = *om.get(b, d);
            if w != 0.0 {
                acc = acc + gamma.get(d, a, c).clone() * (-w);
            }
        }
        acc
    });
    Tensor3::from_fn(m, |e, a, b| {
        let mut acc = zero.clone();
        for c in 0..m {
            let w = *om_inv.get(c, e);
            if w != 0.0 {
                acc = acc + s.get(a, b, c).clone() * w;
            }
        }
        acc
    })
}

/// `Γ^c_{ab} + ⅓ N^c_{ab} + ⅓ N^c_{ba}`.
pub fn symplectify_generic<S>(gamma: &Tensor3<S>, n: &Tensor3<S>) -> Tensor3<S>
where
    S: Clone + Add<Output = S> + Mul<f64, Output = S>,
{
    Tensor3::from_fn(gamma.dim(), |c, a, b| {
        gamma.get(c, a, b).clone() + n.get(c, a, b).clone() * (1.0 / 3.0) + n.get(c, b, a).clone() * (1.0 / 3.0)
    })
}

/// Coefficients of the chosen lifted connection, two orders below `coords`.
pub fn connection_jets(
    m: &ManifoldSpec,
    coords: &[Jet],
    which: LiftedConnection,
    sign: CurvatureSign,
) -> Result<Tensor3<Jet>> {
    match which {
        LiftedConnection::Complete => complete_connection_jets(m, coords),
        LiftedConnection::Bnw => bnw_connection_jets(m, coords, sign),
        LiftedConnection::Symplectified => {
            let c = complete_connection_jets(m, coords)?;
            let zero = c.get(0, 0, 0).zero_like();
            let n = n_tensor_generic(&c, &zero);
            Ok(symplectify_generic(&c, &n))
        }
    }
}

fn connection_value(
    m: &ManifoldSpec,
    pt: &PhasePoint,
    which: LiftedConnection,
    sign: CurvatureSign,
) -> Result<ConnectionValue> {
    m.check_point(&pt.q)?;
    let gamma = connection_jets(m, &pt.coords(2)?, which, sign)?;
    let label = match (which, sign) {
        (LiftedConnection::Bnw, CurvatureSign::Flipped) => format!("bnw(flipped)[{}]", m.name()),
        _ => format!("{}[{}]", which, m.name()),
    };
    Ok(ConnectionValue {
        label,
        coeffs: gamma.values(),
    })
}

pub fn complete_connection_at(m: &ManifoldSpec, pt: &PhasePoint) -> Result<ConnectionValue> {
    connection_value(m, pt, LiftedConnection::Complete, CurvatureSign::Standard)
}

pub fn bnw_connection_at(m: &ManifoldSpec, pt: &PhasePoint, sign: CurvatureSign) -> Result<ConnectionValue> {
    connection_value(m, pt, LiftedConnection::Bnw, sign)
}

pub fn lifted_connection_at(
    m: &ManifoldSpec,
    pt: &PhasePoint,
    which: LiftedConnection,
    sign: CurvatureSign,
) -> Result<ConnectionValue> {
    connection_value(m, pt, which, sign)
}

/// `(∇_a ω)_{bc} = −Γ^d_{ab} ω_{dc} − Γ^d_{ac} ω_{bd}` stored as `t[a][b][c]`.
pub fn nabla_omega(gamma: &Tensor3<f64>) -> Tensor3<f64> {
    let m = gamma.dim();
    let om = omega_matrix(m / 2);
    Tensor3::from_fn(m, |a, b, c| {
        let mut acc = 0.0;
        for d in 0..m {
            acc -= gamma.get(d, a, b) * om.get(d, c);
            acc -= gamma.get(d, a, c) * om.get(b, d);
        }
        acc
    })
}

pub fn nabla_omega_at(gamma: &ConnectionValue) -> Tensor3<f64> {
    nabla_omega(&gamma.coeffs)
}

pub fn n_tensor_at(m: &ManifoldSpec, pt: &PhasePoint) -> Result<Tensor3<f64>> {
    let c = complete_connection_at(m, pt)?;
    Ok(n_tensor_generic(&c.coeffs, &0.0))
}

pub fn symplectify_at(gamma: &ConnectionValue, n: &Tensor3<f64>) -> Result<ConnectionValue> {
    if gamma.dim() != n.dim() {
        return Err(Error::Dimension {
            expected: gamma.dim(),
            found: n.dim(),
        });
    }
    Ok(ConnectionValue {
        label: format!("symplectified {}", gamma.label),
        coeffs: symplectify_generic(&gamma.coeffs, n),
    })
}

/// Curvature of a lifted connection at `pt`; seeds the chart at the maximum
/// jet order.
pub fn phase_curvature_at(
    m: &ManifoldSpec,
    pt: &PhasePoint,
    which: LiftedConnection,
    sign: CurvatureSign,
) -> Result<CurvatureValue> {
    m.check_point(&pt.q)?;
    let gamma = connection_jets(m, &pt.coords(3)?, which, sign)?;
    let r = tensor::curvature(&gamma)?;
    Ok(CurvatureValue {
        label: format!("curvature of {}[{}]", which, m.name()),
        coeffs: r.values(),
    })
}
