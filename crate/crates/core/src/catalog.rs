//! Built-in manifolds and the fixed field test set used by the lemma suite.

use std::f64::consts::PI;

use crate::base_geometry::{FieldRole, FieldSpec, Interval, ManifoldSpec};
use crate::error::Result;

/// Lower bound on `max |∇ᶜ ω|` over 100 samples of the round sphere chart,
/// set to half the maximum observed by an independent finite-difference
/// evaluation of the Riemann extension's Levi-Civita connection.
pub const SPHERE2_NOT_SYMPLECTIC_THRESHOLD: f64 = 1.97;
/// Same for the hyperbolic half-plane.
pub const HALFPLANE2_NOT_SYMPLECTIC_THRESHOLD: f64 = 7.09;

fn upper(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

/// Euclidean plane on `[-1, 1]²`.
pub fn flat2() -> ManifoldSpec {
    ManifoldSpec::new(
        "flat2",
        &["x", "y"],
        &upper(&[&["1", "0"], &["1"]]),
        vec![Interval::new(-1.0, 1.0), Interval::new(-1.0, 1.0)],
    )
    .expect("flat2 is well formed")
}

/// Unit sphere in polar coordinates, away from the poles.
pub fn sphere2() -> ManifoldSpec {
    ManifoldSpec::new(
        "sphere2",
        &["t", "phi"],
        &upper(&[&["1", "0"], &["sin(t)^2"]]),
        vec![Interval::new(0.3, PI - 0.3), Interval::new(-PI, PI)],
    )
    .expect("sphere2 is well formed")
    .with_not_symplectic_threshold(SPHERE2_NOT_SYMPLECTIC_THRESHOLD)
}

/// Poincaré half-plane `g = y⁻² (dx² + dy²)`.
pub fn halfplane2() -> ManifoldSpec {
    ManifoldSpec::new(
        "halfplane2",
        &["x", "y"],
        &upper(&[&["1/y^2", "0"], &["1/y^2"]]),
        vec![Interval::new(-1.0, 1.0), Interval::new(0.5, 2.0)],
    )
    .expect("halfplane2 is well formed")
    .with_not_symplectic_threshold(HALFPLANE2_NOT_SYMPLECTIC_THRESHOLD)
}

/// The catalog run when no manifest is given.
pub fn builtin() -> Vec<ManifoldSpec> {
    vec![flat2(), sphere2(), halfplane2()]
}

pub fn by_name(name: &str) -> Option<ManifoldSpec> {
    builtin().into_iter().find(|m| m.name() == name)
}

/// Fields with non-constant components over which identities quantified
/// over arbitrary fields are checked.
#[derive(Debug, Clone)]
pub struct FieldTestSet {
    pub vectors: Vec<FieldSpec>,
    pub oneforms: Vec<FieldSpec>,
    pub tensors: Vec<FieldSpec>,
}

/// The standard test set, written in terms of the manifold's coordinate
/// names so it exists for every dimension.
pub fn field_test_set(m: &ManifoldSpec) -> Result<FieldTestSet> {
    let n = m.dim();
    let c = |k: usize| m.coords()[k % n].as_str();
    let vector = |label: &str, f: &dyn Fn(usize) -> String| {
        let comps: Vec<String> = (0..n).map(f).collect();
        FieldSpec::new(m, label, FieldRole::Vector, &comps)
    };
    let oneform = |label: &str, f: &dyn Fn(usize) -> String| {
        let comps: Vec<String> = (0..n).map(f).collect();
        FieldSpec::new(m, label, FieldRole::OneForm, &comps)
    };
    let tensor = |label: &str, f: &dyn Fn(usize, usize) -> String| {
        let comps: Vec<String> = (0..n * n).map(|i| f(i / n, i % n)).collect();
        FieldSpec::new(m, label, FieldRole::Tensor11, &comps)
    };
    Ok(FieldTestSet {
        vectors: vec![
            vector("X1", &|k| format!("1 + {} * {}", c(k), c(k + 1)))?,
            vector("X2", &|k| format!("sin({}) + {} * {}", c(k + 1), k + 1, c(k)))?,
            vector("X3", &|k| format!("cos({}) * {} - {}", c(k), c(k + 1), k + 2))?,
        ],
        oneforms: vec![
            oneform("a1", &|k| format!("{}^2 + {}", c(k + 1), c(k)))?,
            oneform("a2", &|k| format!("cos({}) + {}", c(k), k))?,
            oneform("a3", &|k| format!("{} * {} - sin({})", c(k), c(k + 1), c(k)))?,
        ],
        tensors: vec![
            tensor("T1", &|k, l| format!("{} + {} * {}", c(k), l + 1, c(l)))?,
            tensor("T2", &|k, l| format!("cos({}) * {} + {}^2", c(l), k + 1, c(k + l)))?,
        ],
    })
}
