//! Residual checks over seeded samples of the cotangent bundle.

mod lemmas;

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::base_geometry::ManifoldSpec;
use crate::cotangent::{omega_matrix, PhasePoint};
use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::lifted_connections::{connection_jets, nabla_omega, CurvatureSign, LiftedConnection};
use crate::tensor::{self, Tensor3, Tensor4};

pub use lemmas::{check_lemma_suite, LEMMA_ITEMS};

/// Draws allowed per sample before giving up on the fiber exclusion.
pub const MAX_FIBER_DRAWS: usize = 1000;

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Tolerance for algebraic identities.
    pub tol: f64,
    /// Tolerance for identities involving curvature of a lifted connection.
    pub curvature_tol: f64,
    pub sign: CurvatureSign,
    pub manifolds: Vec<ManifoldSpec>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 42,
            samples: 100,
            tol: 1e-8,
            curvature_tol: 1e-7,
            sign: CurvatureSign::Standard,
            manifolds: crate::catalog::builtin(),
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        if !(self.tol > 0.0) || !(self.curvature_tol > 0.0) {
            return Err("tolerances must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Properties,
    Lemmas,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Properties, Suite::Lemmas, Suite::Theorem];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Properties => "properties",
            Suite::Lemmas => "lemmas",
            Suite::Theorem => "theorem",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

fn fnv1a(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generator for sample `index` of `manifold`: the ChaCha key is the seed,
/// a hash of the manifold name and the index, so every sample is reproducible
/// on its own.
fn sample_rng(seed: u64, manifold: &str, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(manifold).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Sample `index`: `q` uniform in the base box, `p` uniform in the fiber box
/// outside the exclusion ball. A sampled `q` where the metric is not positive
/// definite is an error.
pub fn sample_point(m: &ManifoldSpec, seed: u64, index: u64) -> Result<PhasePoint> {
    let mut rng = sample_rng(seed, m.name(), index);
    let q: Vec<f64> = m.base_box().iter().map(|iv| iv.lerp(rng.random::<f64>())).collect();
    m.check_positive_definite(&q)?;
    let mut p = vec![0.0; m.dim()];
    for _ in 0..MAX_FIBER_DRAWS {
        for v in p.iter_mut() {
            *v = m.fiber.lerp(rng.random::<f64>());
        }
        if p.iter().map(|v| v * v).sum::<f64>().sqrt() > m.fiber_exclusion {
            return Ok(PhasePoint::new(q, p));
        }
    }
    Err(Error::SamplingExhausted {
        manifold: m.name().to_string(),
        attempts: MAX_FIBER_DRAWS,
        point: q.into_iter().chain(p).collect(),
    })
}

pub fn sample_points(m: &ManifoldSpec, cfg: &SampleConfig) -> Result<Vec<PhasePoint>> {
    (0..cfg.samples as u64).map(|i| sample_point(m, cfg.seed, i)).collect()
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub manifold: String,
    pub property: String,
    pub anchor: String,
    pub max_residual: f64,
    pub argmax_point: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub meta: ReportMeta,
    pub results: Vec<ReportEntry>,
    pub pass: bool,
}

impl PropertyReport {
    pub fn new(cfg: &SampleConfig, results: Vec<ReportEntry>) -> PropertyReport {
        let pass = results.iter().all(|r| r.pass);
        PropertyReport {
            meta: ReportMeta {
                seed: cfg.seed,
                samples: cfg.samples,
                tol: cfg.tol,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            results,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn entry(&self, manifold: &str, property: &str) -> Option<&ReportEntry> {
        self.results
            .iter()
            .find(|r| r.manifold == manifold && r.property == property)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["manifold", "property", "max_residual", "pass", "anchor"];
        let rows: Vec<[String; 5]> = self
            .results
            .iter()
            .map(|r| {
                [
                    r.manifold.clone(),
                    r.property.clone(),
                    format!("{:.3e}", r.max_residual),
                    if r.pass { "ok" } else { "FAIL" }.to_string(),
                    r.anchor.clone(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut line = String::new();
        let mut push_row = |cells: &[&str]| {
            line.clear();
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                if i + 1 == cells.len() {
                    line.push_str(cell);
                } else {
                    let pad = w - cell.chars().count();
                    let _ = write!(line, "{cell}{}  ", " ".repeat(pad));
                }
            }
            line.trim_end().to_string()
        };
        writeln!(f, "{}", push_row(&header))?;
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            writeln!(f, "{}", push_row(&cells))?;
        }
        writeln!(
            f,
            "seed {}  samples {}  tol {:e}  version {}",
            self.meta.seed, self.meta.samples, self.meta.tol, self.meta.version
        )?;
        write!(f, "overall: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Pass rule for one entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Bound {
    AtMost(f64),
    /// Positive control: the residual must reach the threshold.
    AtLeast(f64),
}

impl Bound {
    fn passes(self, value: f64) -> bool {
        match self {
            Bound::AtMost(t) => value <= t,
            Bound::AtLeast(t) => value >= t,
        }
    }
}

pub(crate) struct Item {
    pub property: String,
    pub anchor: &'static str,
    pub bound: Bound,
}

/// Evaluates `eval` at every sample in parallel and reduces the residual
/// vectors in sample order, so the report does not depend on scheduling.
pub(crate) fn collect_entries<F>(
    m: &ManifoldSpec,
    points: &[PhasePoint],
    items: &[Item],
    eval: F,
) -> Result<Vec<ReportEntry>>
where
    F: Fn(&PhasePoint) -> Result<Vec<f64>> + Sync,
{
    let per_sample: Vec<Vec<f64>> = points.par_iter().map(&eval).collect::<Result<_>>()?;
    let mut worst = vec![(f64::NEG_INFINITY, 0usize); items.len()];
    for (s, residuals) in per_sample.iter().enumerate() {
        debug_assert_eq!(residuals.len(), items.len());
        for (w, &r) in worst.iter_mut().zip(residuals) {
            let replace = if r.is_nan() { !w.0.is_nan() } else { r > w.0 };
            if replace {
                *w = (r, s);
            }
        }
    }
    Ok(items
        .iter()
        .zip(worst)
        .map(|(item, (value, s))| ReportEntry {
            manifold: m.name().to_string(),
            property: item.property.clone(),
            anchor: item.anchor.to_string(),
            max_residual: value,
            argmax_point: points[s].flat(),
            pass: item.bound.passes(value),
        })
        .collect())
}

pub(crate) fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x.abs())
        }
    })
}

/// The defining properties and which connections they apply to.
pub const PROPERTY_IDS: [(&str, &str); 6] = [
    (
        "lift",
        "Γ̂^{x^k}_{x^i x^j} = Γ^k_{ij} and Γ̂^{x^k}_{ab} = 0 when a or b is a fiber index",
    ),
    ("torsion", "Γ̂^c_{ab} − Γ̂^c_{ba} = 0"),
    ("symplectic", "∇̂ω = 0"),
    ("homogeneous", "[ξ, ∇̂_X Y] − ∇̂_{[ξ,X]} Y − ∇̂_X [ξ,Y] = 0"),
    ("bnw-curv", "ω(X₁, R̂(Y,X₂)X₃ + R̂(Y,X₃)X₂) + cyclic(X₁,X₂,X₃) = 0"),
    ("not-symplectic-complete", "max |∇ᶜω| ≥ τ₀ (positive control)"),
];

pub const THEOREM_ID: &str = "theorem";
pub const THEOREM_ANCHOR: &str = "∇ᶜ_V W + ⅓N(V,W) + ⅓N(W,V) = ∇̂_V W";

fn anchor_of(id: &str) -> &'static str {
    PROPERTY_IDS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, a)| *a)
        .expect("known id")
}

fn applies_to(id: &str) -> &'static [LiftedConnection] {
    use LiftedConnection::*;
    match id {
        "lift" | "torsion" | "homogeneous" => &[Bnw, Complete, Symplectified],
        "symplectic" | "bnw-curv" => &[Bnw, Symplectified],
        "not-symplectic-complete" => &[Complete],
        _ => &[],
    }
}

/// Property ids to evaluate for `id`, which is either a bare id or
/// `id[connection]`.
fn resolve(m: &ManifoldSpec, id: &str) -> Result<Vec<(&'static str, LiftedConnection)>> {
    let (base, only) = match id.split_once('[') {
        Some((b, rest)) => {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::UnknownProperty(id.into()))?;
            let which = LiftedConnection::ALL
                .into_iter()
                .find(|c| c.name() == name)
                .ok_or_else(|| Error::UnknownProperty(id.into()))?;
            (b, Some(which))
        }
        None => (id, None),
    };
    let key = PROPERTY_IDS
        .iter()
        .map(|(k, _)| *k)
        .find(|k| *k == base)
        .ok_or_else(|| Error::UnknownProperty(id.into()))?;
    if key == "not-symplectic-complete" && m.not_symplectic_threshold.is_none() {
        return Ok(Vec::new());
    }
    let targets: Vec<_> = applies_to(key)
        .iter()
        .copied()
        .filter(|c| only.is_none_or(|o| o == *c))
        .map(|c| (key, c))
        .collect();
    if targets.is_empty() && only.is_some() {
        return Err(Error::UnknownProperty(id.into()));
    }
    Ok(targets)
}

fn entry_name(id: &str, which: LiftedConnection) -> String {
    if id == "not-symplectic-complete" {
        id.to_string()
    } else {
        format!("{id}[{which}]")
    }
}

/// Lift residual: base block against the base Christoffels, and base
/// components with a fiber input.
fn lift_residual(gamma: &Tensor3<f64>, base: &Tensor3<f64>) -> f64 {
    let n = base.dim();
    let m = gamma.dim();
    let mut worst = 0.0f64;
    for k in 0..n {
        for a in 0..m {
            for b in 0..m {
                let target = if a < n && b < n { *base.get(k, a, b) } else { 0.0 };
                worst = max_abs([worst, gamma.get(k, a, b) - target]);
            }
        }
    }
    worst
}

/// `(L_ξ∇)(∂_a, ∂_b) = [ξ, ∇_a ∂_b] − ∇_{[ξ,∂_a]} ∂_b − ∇_a [ξ, ∂_b]` over all
/// basis pairs. `gamma` must have order at least one; `coords` are the chart
/// coordinates at order two.
pub fn homogeneity_residual(gamma: &Tensor3<Jet>, coords: &[Jet]) -> Result<f64> {
    let m = gamma.dim();
    let n = m / 2;
    let g1 = gamma.truncate(1)?;
    let gv = gamma.values();
    let p2 = &coords[n..];
    let xi2 = crate::cotangent::liouville_jets(p2);
    let xi1 = tensor::truncate_all(&xi2, 1)?;
    let zero2 = coords[0].zero_like();
    let unit = |a: usize| -> Vec<Jet> {
        (0..m)
            .map(|c| zero2.constant_like(if c == a { 1.0 } else { 0.0 }))
            .collect()
    };
    // [ξ, ∂_a] as jets of order one
    let xi_brackets: Vec<Vec<Jet>> = (0..m)
        .map(|a| tensor::lie_bracket(&xi2, &unit(a)))
        .collect::<std::result::Result<_, _>>()?;
    let mut worst = 0.0f64;
    for a in 0..m {
        let u_a = tensor::values(&xi_brackets[a]);
        for b in 0..m {
            let w: Vec<Jet> = (0..m).map(|c| g1.get(c, a, b).clone()).collect();
            let first = tensor::values(&tensor::lie_bracket(&xi1, &w)?);
            let second: Vec<f64> = (0..m).map(|c| (0..m).map(|d| u_a[d] * gv.get(c, d, b)).sum()).collect();
            let mut e_a = vec![0.0; m];
            e_a[a] = 1.0;
            let third = tensor::covariant_derivative(&gv, &e_a, &xi_brackets[b]);
            worst = max_abs(std::iter::once(worst).chain((0..m).map(|c| first[c] - second[c] - third[c])));
        }
    }
    Ok(worst)
}

/// Largest cyclic sum `ω(X₁, R(Y,X₂)X₃ + R(Y,X₃)X₂) + cyclic` over basis
/// quadruples.
pub fn cyclic_curvature_residual(r: &Tensor4<f64>) -> f64 {
    let m = r.dim();
    let om = omega_matrix(m / 2);
    // ω(X₁, R(Y,X₂)X₃) = Ω[x1][k] R^k_{x3 y x2}
    let term = |x1: usize, y: usize, x2: usize, x3: usize| -> f64 {
        (0..m)
            .map(|k| om.get(x1, k) * (r.get(k, x3, y, x2) + r.get(k, x2, y, x3)))
            .sum()
    };
    let mut worst = 0.0f64;
    for y in 0..m {
        for x1 in 0..m {
            for x2 in 0..m {
                for x3 in 0..m {
                    let s = term(x1, y, x2, x3) + term(x2, y, x3, x1) + term(x3, y, x1, x2);
                    worst = max_abs([worst, s]);
                }
            }
        }
    }
    worst
}

fn property_residuals(
    m: &ManifoldSpec,
    pt: &PhasePoint,
    targets: &[(&'static str, LiftedConnection)],
    sign: CurvatureSign,
) -> Result<Vec<f64>> {
    let needs_curvature = targets.iter().any(|(k, _)| matches!(*k, "homogeneous" | "bnw-curv"));
    let order = if needs_curvature { 3 } else { 2 };
    let coords = pt.coords(order)?;
    let coords2 = tensor::truncate_all(&coords, 2)?;
    let base = m.christoffel_jets(&pt.coords(1)?)?.values();
    let mut cache: Vec<(LiftedConnection, Tensor3<Jet>)> = Vec::new();
    let mut out = Vec::with_capacity(targets.len());
    for &(key, which) in targets {
        if !cache.iter().any(|(w, _)| *w == which) {
            cache.push((which, connection_jets(m, &coords, which, sign)?));
        }
        let gamma = &cache.iter().find(|(w, _)| *w == which).expect("cached").1;
        let gv = gamma.values();
        let r = match key {
            "lift" => lift_residual(&gv, &base),
            "torsion" => {
                let d = gv.dim();
                max_abs((0..d).flat_map(|c| {
                    let gv = &gv;
                    (0..d).flat_map(move |a| (0..d).map(move |b| gv.get(c, a, b) - gv.get(c, b, a)))
                }))
            }
            "symplectic" | "not-symplectic-complete" => nabla_omega(&gv).max_abs(),
            "homogeneous" => homogeneity_residual(gamma, &coords2)?,
            "bnw-curv" => cyclic_curvature_residual(&tensor::curvature(gamma)?.values()),
            _ => unreachable!("resolved ids only"),
        };
        out.push(r);
    }
    Ok(out)
}

fn property_items(m: &ManifoldSpec, cfg: &SampleConfig, targets: &[(&'static str, LiftedConnection)]) -> Vec<Item> {
    targets
        .iter()
        .map(|&(key, which)| Item {
            property: entry_name(key, which),
            anchor: anchor_of(key),
            bound: match key {
                "not-symplectic-complete" => Bound::AtLeast(m.not_symplectic_threshold.unwrap_or(f64::INFINITY)),
                "bnw-curv" => Bound::AtMost(cfg.curvature_tol),
                _ => Bound::AtMost(cfg.tol),
            },
        })
        .collect()
}

fn run_properties(
    m: &ManifoldSpec,
    cfg: &SampleConfig,
    points: &[PhasePoint],
    ids: &[&str],
) -> Result<Vec<ReportEntry>> {
    let mut targets = Vec::new();
    for id in ids {
        targets.extend(resolve(m, id)?);
    }
    let items = property_items(m, cfg, &targets);
    collect_entries(m, points, &items, |pt| property_residuals(m, pt, &targets, cfg.sign))
}

/// Entries for one property id (bare or `id[connection]`) on `m`.
pub fn check_property(m: &ManifoldSpec, cfg: &SampleConfig, id: &str) -> Result<Vec<ReportEntry>> {
    let points = sample_points(m, cfg)?;
    run_properties(m, cfg, &points, &[id])
}

/// Largest `|Γˢ − Γ̂| / (1 + |Γ̂|)` over all components.
pub fn theorem_residual(m: &ManifoldSpec, pt: &PhasePoint, sign: CurvatureSign) -> Result<f64> {
    let coords = pt.coords(2)?;
    let s = connection_jets(m, &coords, LiftedConnection::Symplectified, sign)?.values();
    let b = connection_jets(m, &coords, LiftedConnection::Bnw, sign)?.values();
    Ok(max_abs(s.iter().zip(b.iter()).map(|(x, y)| (x - y) / (1.0 + y.abs()))))
}

fn run_theorem(m: &ManifoldSpec, cfg: &SampleConfig, points: &[PhasePoint]) -> Result<ReportEntry> {
    let items = [Item {
        property: THEOREM_ID.to_string(),
        anchor: THEOREM_ANCHOR,
        bound: Bound::AtMost(cfg.tol),
    }];
    let mut entries = collect_entries(m, points, &items, |pt| Ok(vec![theorem_residual(m, pt, cfg.sign)?]))?;
    Ok(entries.remove(0))
}

pub fn check_theorem(m: &ManifoldSpec, cfg: &SampleConfig) -> Result<ReportEntry> {
    run_theorem(m, cfg, &sample_points(m, cfg)?)
}

/// Runs `suites` on every manifold of `cfg`, in manifold order.
pub fn run(cfg: &SampleConfig, suites: &[Suite]) -> Result<PropertyReport> {
    let mut results = Vec::new();
    for m in &cfg.manifolds {
        let points = sample_points(m, cfg)?;
        for suite in Suite::ALL.into_iter().filter(|s| suites.contains(s)) {
            match suite {
                Suite::Properties => {
                    let ids: Vec<&str> = PROPERTY_IDS.iter().map(|(k, _)| *k).collect();
                    results.extend(run_properties(m, cfg, &points, &ids)?);
                }
                Suite::Lemmas => results.extend(lemmas::run_lemmas(m, cfg, &points, None)?),
                Suite::Theorem => results.push(run_theorem(m, cfg, &points)?),
            }
        }
    }
    Ok(PropertyReport::new(cfg, results))
}

/// Runs a single id (a property id, `theorem`, or a lemma item) on every
/// manifold of `cfg`.
pub fn run_single(cfg: &SampleConfig, id: &str) -> Result<PropertyReport> {
    let known = id == THEOREM_ID
        || LEMMA_ITEMS.iter().any(|(k, _)| *k == id)
        || PROPERTY_IDS
            .iter()
            .any(|(k, _)| id == *k || id.starts_with(&format!("{k}[")));
    if !known {
        return Err(Error::UnknownProperty(id.to_string()));
    }
    let mut results = Vec::new();
    for m in &cfg.manifolds {
        let points = sample_points(m, cfg)?;
        if id == THEOREM_ID {
            results.push(run_theorem(m, cfg, &points)?);
        } else if LEMMA_ITEMS.iter().any(|(k, _)| *k == id) {
            results.extend(lemmas::run_lemmas(m, cfg, &points, Some(id))?);
        } else {
            results.extend(run_properties(m, cfg, &points, &[id])?);
        }
    }
    Ok(PropertyReport::new(cfg, results))
}
