//! Dense component tables and the coordinate formulas shared by connections
//! on the base and on the cotangent bundle.

use crate::jets::{Jet, JetError};

/// Square table `t[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2<T> {
    dim: usize,
    data: Vec<T>,
}

/// Connection-shaped table `t[c][a][b]` (upper index first).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    dim: usize,
    data: Vec<T>,
}

/// Curvature-shaped table `t[k][l][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4<T> {
    dim: usize,
    data: Vec<T>,
}

macro_rules! table_common {
    ($name:ident, $rank:expr) => {
        impl<T> $name<T> {
            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn as_slice(&self) -> &[T] {
                &self.data
            }

            pub fn iter(&self) -> std::slice::Iter<'_, T> {
                self.data.iter()
            }

            pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> $name<U> {
                $name {
                    dim: self.dim,
                    data: self.data.iter().map(f).collect(),
                }
            }

            pub fn from_vec(dim: usize, data: Vec<T>) -> Self {
                assert_eq!(data.len(), dim.pow($rank), "table size");
                $name { dim, data }
            }
        }

        impl $name<Jet> {
            pub fn values(&self) -> $name<f64> {
                self.map(Jet::value)
            }

            pub fn truncate(&self, order: usize) -> Result<$name<Jet>, JetError> {
                Ok($name {
                    dim: self.dim,
                    data: self
                        .data
                        .iter()
                        .map(|j| j.truncate(order))
                        .collect::<Result<_, _>>()?,
                })
            }
        }

        impl $name<f64> {
            /// Largest absolute entry.
            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
            }
        }
    };
}

table_common!(Tensor2, 2);
table_common!(Tensor3, 3);
table_common!(Tensor4, 4);

impl<T> Tensor2<T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Tensor2 { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> Tensor3<T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for c in 0..dim {
            for a in 0..dim {
                for b in 0..dim {
                    data.push(f(c, a, b));
                }
            }
        }
        Tensor3 { dim, data }
    }

    pub fn try_from_fn<E>(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Result<T, E>) -> Result<Self, E> {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for c in 0..dim {
            for a in 0..dim {
                for b in 0..dim {
                    data.push(f(c, a, b)?);
                }
            }
        }
        Ok(Tensor3 { dim, data })
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> &T {
        &self.data[(c * self.dim + a) * self.dim + b]
    }
}

impl<T> Tensor4<T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for k in 0..dim {
            for l in 0..dim {
                for i in 0..dim {
                    for j in 0..dim {
                        data.push(f(k, l, i, j));
                    }
                }
            }
        }
        Tensor4 { dim, data }
    }

    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> &T {
        &self.data[((k * self.dim + l) * self.dim + i) * self.dim + j]
    }
}

/// Sums `f(m)` over `m in 0..n`, starting from `zero`.
pub fn sum_jets(zero: &Jet, n: usize, mut f: impl FnMut(usize) -> Jet) -> Jet {
    let mut acc = zero.clone();
    for m in 0..n {
        acc = &acc + &f(m);
    }
    acc
}

pub fn truncate_all(jets: &[Jet], order: usize) -> Result<Vec<Jet>, JetError> {
    jets.iter().map(|j| j.truncate(order)).collect()
}

pub fn values(jets: &[Jet]) -> Vec<f64> {
    jets.iter().map(Jet::value).collect()
}

/// Inverts a matrix of jets by Gauss-Jordan elimination with partial
/// pivoting on the order-0 values. `None` when a pivot vanishes.
pub fn invert(m: &Tensor2<Jet>) -> Option<Tensor2<Jet>> {
    let n = m.dim();
    let zero = m.get(0, 0).zero_like();
    let one = zero.constant_like(1.0);
    let mut a: Vec<Vec<Jet>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut inv: Vec<Vec<Jet>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let scale = m.iter().fold(0.0f64, |s, j| s.max(j.value().abs()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].value().abs().total_cmp(&a[s][col].value().abs()))?;
        if a[pivot][col].value().abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip().ok()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
            }
        }
    }
    Some(Tensor2::from_fn(n, |i, j| inv[i][j].clone()))
}

/// Levi-Civita coefficients `Γ^c_{ab} = ½ g^{cd}(∂_a g_{db} + ∂_b g_{da} − ∂_d g_{ab})`.
///
/// `metric` is given at order `K`, `inverse` at order `K - 1`; the
/// coordinate index `a` is jet variable `a`. Result has order `K - 1`.
pub fn levi_civita(metric: &Tensor2<Jet>, inverse: &Tensor2<Jet>) -> Result<Tensor3<Jet>, JetError> {
    let n = metric.dim();
    // dg[a][i][j] = ∂_a g_ij
    let dg: Vec<Tensor2<Jet>> = (0..n)
        .map(|a| -> Result<_, JetError> {
            let entries = metric.iter().map(|g| g.derivative(a)).collect::<Result<Vec<_>, _>>()?;
            Ok(Tensor2::from_vec(n, entries))
        })
        .collect::<Result<_, _>>()?;
    let zero = inverse.get(0, 0).zero_like();
    Ok(Tensor3::from_fn(n, |c, a, b| {
        let s = sum_jets(&zero, n, |d| {
            let lowered = &(dg[a].get(d, b) + dg[b].get(d, a)) - dg[d].get(a, b);
            inverse.get(c, d) * &lowered
        });
        s.scale(0.5)
    }))
}

/// Curvature `R^k_{lij} = ∂_i Γ^k_{jl} − ∂_j Γ^k_{il} + Γ^k_{im} Γ^m_{jl} − Γ^k_{jm} Γ^m_{il}`,
/// so that `R(∂_i, ∂_j) ∂_l = R^k_{lij} ∂_k` with
/// `R(X,Y) = ∇_X ∇_Y − ∇_Y ∇_X − ∇_{[X,Y]}`. Result is one order lower.
pub fn curvature(gamma: &Tensor3<Jet>) -> Result<Tensor4<Jet>, JetError> {
    let m = gamma.dim();
    let order = gamma.get(0, 0, 0).order();
    if order == 0 {
        return Err(JetError::NothingToDifferentiate);
    }
    let low = gamma.truncate(order - 1)?;
    // dgamma[i] = ∂_i Γ
    let dgamma: Vec<Tensor3<Jet>> = (0..m)
        .map(|i| -> Result<_, JetError> {
            let entries = gamma.iter().map(|g| g.derivative(i)).collect::<Result<Vec<_>, _>>()?;
            Ok(Tensor3::from_vec(m, entries))
        })
        .collect::<Result<_, _>>()?;
    let zero = low.get(0, 0, 0).zero_like();
    Ok(Tensor4::from_fn(m, |k, l, i, j| {
        let quad = sum_jets(&zero, m, |s| {
            &(low.get(k, i, s) * low.get(s, j, l)) - &(low.get(k, j, s) * low.get(s, i, l))
        });
        &(dgamma[i].get(k, j, l) - dgamma[j].get(k, i, l)) + &quad
    }))
}

/// `(∇_V W)^c = V^a ∂_a W^c + Γ^c_{ab} V^a W^b` at the expansion point, for a
/// field `W` given as jets of order at least one.
pub fn covariant_derivative(gamma: &Tensor3<f64>, v: &[f64], w: &[Jet]) -> Vec<f64> {
    let m = gamma.dim();
    (0..m)
        .map(|c| {
            let mut acc = 0.0;
            for a in 0..m {
                acc += v[a] * w[c].d(a);
                for b in 0..m {
                    acc += gamma.get(c, a, b) * v[a] * w[b].value();
                }
            }
            acc
        })
        .collect()
}

/// Lie bracket `[V, W]^c = V^a ∂_a W^c − W^a ∂_a V^c`, one order lower.
pub fn lie_bracket(v: &[Jet], w: &[Jet]) -> Result<Vec<Jet>, JetError> {
    let m = v.len();
    let order = v[0].order();
    if order == 0 {
        return Err(JetError::NothingToDifferentiate);
    }
    let vl = truncate_all(v, order - 1)?;
    let wl = truncate_all(w, order - 1)?;
    let zero = vl[0].zero_like();
    (0..m)
        .map(|c| -> Result<Jet, JetError> {
            let mut acc = zero.clone();
            for a in 0..m {
                acc = &acc + &(&vl[a] * &w[c].derivative(a)?);
                acc = &acc - &(&wl[a] * &v[c].derivative(a)?);
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_jet_matrix() {
        let c = Jet::coordinates(&[0.4, 1.1], 2).unwrap();
        let one = c[0].constant_like(1.0);
        let m = Tensor2::from_vec(
            2,
            vec![
                &one + &(&c[0] * &c[0]),
                c[1].clone(),
                c[1].clone(),
                one.clone() + one.clone(),
            ],
        );
        let inv = invert(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = &(m.get(i, 0) * inv.get(0, j)) + &(m.get(i, 1) * inv.get(1, j));
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((e.value() - target).abs() < 1e-14);
                assert!(e.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let c = Jet::coordinates(&[1.0], 1).unwrap();
        let z = c[0].zero_like();
        let m = Tensor2::from_vec(2, vec![c[0].clone(), c[0].clone(), z.clone(), z]);
        assert!(invert(&m).is_none());
    }

    #[test]
    fn bracket_of_coordinate_fields_vanishes() {
        let c = Jet::coordinates(&[0.3, -0.2], 2).unwrap();
        let one = c[0].constant_like(1.0);
        let zero = c[0].zero_like();
        let dx = vec![one.clone(), zero.clone()];
        let dy = vec![zero, one];
        let b = lie_bracket(&dx, &dy).unwrap();
        assert!(b.iter().all(Jet::is_zero));
        // [x ∂_x, ∂_x] = −∂_x
        let xdx = vec![c[0].clone(), c[0].zero_like()];
        let b = lie_bracket(&xdx, &dx).unwrap();
        assert_eq!(b[0].value(), -1.0);
        assert_eq!(b[1].value(), 0.0);
    }
}
