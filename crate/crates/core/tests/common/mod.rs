//! Finite-difference oracle and sampling helpers shared by the integration
//! tests. Nothing here goes through the jet arithmetic.

#![allow(dead_code)]

use lift_verify::base_geometry::ManifoldSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Step used by the nested central differences before extrapolation.
pub const FD_STEP: f64 = 2e-3;

/// Weights of the central stencil for the `k`-th derivative, offsets in units of h.
fn stencil(k: u8) -> Vec<(f64, f64)> {
    match k {
        0 => vec![(0.0, 1.0)],
        1 => vec![(-1.0, -0.5), (1.0, 0.5)],
        2 => vec![(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        3 => vec![(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
        _ => panic!("stencil order {k} not supported"),
    }
}

fn central(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u8], h: f64) -> f64 {
    // tensor product of one-dimensional stencils
    let mut terms: Vec<(Vec<f64>, f64)> = vec![(x.to_vec(), 1.0)];
    for (i, &k) in alpha.iter().enumerate() {
        let mut next = Vec::new();
        for (pt, w) in &terms {
            for (off, c) in stencil(k) {
                let mut q = pt.clone();
                q[i] += off * h;
                next.push((q, w * c / h.powi(k as i32)));
            }
        }
        terms = next;
    }
    terms.iter().map(|(q, w)| w * f(q)).sum()
}

/// `∂^α f(x)` by central differences with one Richardson step.
pub fn richardson_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u8]) -> f64 {
    let coarse = central(f, x, alpha, FD_STEP);
    let fine = central(f, x, alpha, FD_STEP / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// All multi-indices in `n` variables with `1 ≤ |α| ≤ order`.
pub fn multi_indices(n: usize, order: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; n]];
    for _ in 0..order {
        let mut next = Vec::new();
        for a in &out {
            for i in 0..n {
                let mut b = a.clone();
                b[i] += 1;
                if !next.contains(&b) {
                    next.push(b);
                }
            }
        }
        out.extend(next);
        out.sort();
        out.dedup();
    }
    out.retain(|a| a.iter().any(|&e| e > 0));
    out
}

/// Uniform points in the base box, shrunk so stencils stay inside it.
pub fn base_points(m: &ManifoldSpec, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let margin = 4.0 * FD_STEP;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            m.base_box()
                .iter()
                .map(|iv| rng.random_range(iv.lo + margin..iv.hi - margin))
                .collect()
        })
        .collect()
}

/// Metric component `g_ij` evaluated over the reals.
pub fn metric_fn(m: &ManifoldSpec, i: usize, j: usize) -> impl Fn(&[f64]) -> f64 + '_ {
    move |q: &[f64]| m.metric_expr(i, j).eval(q).expect("metric evaluates")
}

/// Small dense inverse by Gauss-Jordan elimination.
pub fn inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, piv);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                let row_c = m[c].clone();
                for (v, w) in m[r].iter_mut().zip(row_c) {
                    *v -= f * w;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Christoffel symbols `Γ^k_ij` from finite-difference metric partials.
pub fn christoffel_fd(m: &ManifoldSpec, q: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let n = m.dim();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| metric_fn(m, i, j)(q)).collect())
        .collect();
    let ginv = inverse(&g);
    let dg = |k: usize, i: usize, j: usize| {
        let mut alpha = vec![0u8; n];
        alpha[k] = 1;
        richardson_partial(&metric_fn(m, i, j), q, &alpha)
    };
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .map(|l| 0.5 * ginv[k][l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)))
                                .sum()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
