//! Command-line front end: manifests, suite selection, report output and exit
//! codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::base_geometry::{Interval, ManifoldSpec, DEFAULT_FIBER, DEFAULT_FIBER_EXCLUSION};
use crate::catalog;
use crate::error::Error;
use crate::lifted_connections::CurvatureSign;
use crate::verify::{self, PropertyReport, SampleConfig, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "LIFT_VERIFY_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid manifest `{path}`: {source}")]
    ManifestSyntax { path: PathBuf, source: toml::de::Error },
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(Error::UnknownProperty(_)) => EXIT_USAGE,
            CliError::Runtime(_) | CliError::Write { .. } => EXIT_RUNTIME,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lift-verify",
    version,
    about = "Check identities of lifted connections on cotangent bundles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the selected suites on the built-in catalog and any manifest manifolds.
    Run {
        #[command(flatten)]
        opts: RunOpts,
        /// Suite to run (repeatable); all suites when omitted.
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteArg>,
    },
    /// List the built-in manifolds.
    Catalog,
    /// Run one property, lemma item or `theorem`.
    Check {
        /// Property id, e.g. `symplectic`, `lift[complete]`, `omega-hh`, `theorem`.
        id: String,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Debug, Args)]
pub struct RunOpts {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sign of the curvature entering the BNW formula.
    #[arg(long, value_enum, default_value_t = SignArg::Standard)]
    pub curvature_sign: SignArg,
    /// Skip the built-in catalog and use only manifest manifolds.
    #[arg(long)]
    pub no_catalog: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Properties,
    Lemmas,
    Theorem,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Properties => Suite::Properties,
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::Theorem => Suite::Theorem,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Standard,
    Flipped,
}

impl From<SignArg> for CurvatureSign {
    fn from(s: SignArg) -> CurvatureSign {
        match s {
            SignArg::Standard => CurvatureSign::Standard,
            SignArg::Flipped => CurvatureSign::Flipped,
        }
    }
}

/// Manifest file layout.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub manifold: ManifoldList,
    pub run: Option<RunSection>,
}

/// `[manifold]` may be a single table or an array of tables.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ManifoldList {
    One(ManifoldEntry),
    Many(Vec<ManifoldEntry>),
}

impl Default for ManifoldList {
    fn default() -> Self {
        ManifoldList::Many(Vec::new())
    }
}

impl ManifoldList {
    fn into_vec(self) -> Vec<ManifoldEntry> {
        match self {
            ManifoldList::One(m) => vec![m],
            ManifoldList::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldEntry {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    /// Upper-triangle components keyed `g_ij` (1-based, `i ≤ j`); missing
    /// off-diagonal entries are zero.
    pub metric: BTreeMap<String, String>,
    pub domain: BTreeMap<String, [f64; 2]>,
    pub fiber: Option<[f64; 2]>,
    pub fiber_exclusion: Option<f64>,
    pub not_symplectic_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub suites: Option<Vec<String>>,
}

fn metric_key(key: &str, n: usize) -> Option<(usize, usize)> {
    let rest = key.strip_prefix("g_")?;
    let (i, j): (usize, usize) = match rest.split_once('_') {
        Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
        None if rest.len() == 2 => (rest[..1].parse().ok()?, rest[1..].parse().ok()?),
        None => return None,
    };
    (1 <= i && i <= j && j <= n).then(|| (i - 1, j - 1))
}

impl ManifoldEntry {
    pub fn to_spec(&self) -> Result<ManifoldSpec, CliError> {
        let bad = |reason: String| CliError::Manifest(format!("manifold `{}`: {reason}", self.name));
        let n = self.dim;
        if n == 0 || self.coords.len() != n {
            return Err(bad(format!("dim = {n} but {} coordinates given", self.coords.len())));
        }
        let mut upper: Vec<Vec<String>> = (0..n).map(|i| vec!["0".to_string(); n - i]).collect();
        let mut seen = vec![false; n];
        for (key, expr) in &self.metric {
            let (i, j) = metric_key(key, n).ok_or_else(|| bad(format!("unknown metric key `{key}`")))?;
            upper[i][j - i] = expr.clone();
            if i == j {
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(bad(format!("missing diagonal component g_{0}{0}", i + 1)));
        }
        for key in self.domain.keys() {
            if !self.coords.contains(key) {
                return Err(bad(format!("domain names unknown coordinate `{key}`")));
            }
        }
        let base_box = self
            .coords
            .iter()
            .map(|c| {
                let [lo, hi] = *self.domain.get(c).ok_or_else(|| bad(format!("no domain for `{c}`")))?;
                if !(lo < hi) {
                    return Err(bad(format!("empty domain for `{c}`")));
                }
                Ok(Interval::new(lo, hi))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut spec = ManifoldSpec::new(&self.name, &self.coords, &upper, base_box).map_err(|e| bad(e.to_string()))?;
        let fiber = match self.fiber {
            Some([lo, hi]) if lo < hi => Interval::new(lo, hi),
            Some(_) => return Err(bad("empty fiber interval".into())),
            None => DEFAULT_FIBER,
        };
        let exclusion = self.fiber_exclusion.unwrap_or(DEFAULT_FIBER_EXCLUSION);
        if !(exclusion >= 0.0) {
            return Err(bad("fiber_exclusion must be non-negative".into()));
        }
        spec = spec.with_fiber(fiber, exclusion);
        if let Some(t) = self.not_symplectic_threshold {
            if !(t > 0.0) {
                return Err(bad("not_symplectic_threshold must be positive".into()));
            }
            spec = spec.with_not_symplectic_threshold(t);
        }
        Ok(spec)
    }
}

pub fn parse_manifest(text: &str, path: &Path) -> Result<(Vec<ManifoldSpec>, RunSection), CliError> {
    let manifest: Manifest = toml::from_str(text).map_err(|source| CliError::ManifestSyntax {
        path: path.to_path_buf(),
        source,
    })?;
    let specs = manifest
        .manifold
        .into_vec()
        .iter()
        .map(ManifoldEntry::to_spec)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((specs, manifest.run.unwrap_or_default()))
}

pub fn load_manifest(path: &Path) -> Result<(Vec<ManifoldSpec>, RunSection), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_manifest(&text, path)
}

/// Resolves flags, manifest and defaults into a config and suite list.
fn configure(opts: &RunOpts, suites: &[SuiteArg]) -> Result<(SampleConfig, Vec<Suite>), CliError> {
    let (extra, run) = match &opts.manifest {
        Some(path) => load_manifest(path)?,
        None => (Vec::new(), RunSection::default()),
    };
    let mut manifolds = if opts.no_catalog {
        Vec::new()
    } else {
        catalog::builtin()
    };
    for m in extra {
        if manifolds.iter().any(|x| x.name() == m.name()) {
            return Err(CliError::Manifest(format!("duplicate manifold name `{}`", m.name())));
        }
        manifolds.push(m);
    }
    if manifolds.is_empty() {
        return Err(CliError::Usage("no manifolds to check".into()));
    }
    let defaults = SampleConfig::default();
    let cfg = SampleConfig {
        seed: opts.seed.or(run.seed).unwrap_or(defaults.seed),
        samples: opts.samples.or(run.samples).unwrap_or(defaults.samples),
        tol: opts.tol.or(run.tol).unwrap_or(defaults.tol),
        curvature_tol: defaults.curvature_tol,
        sign: opts.curvature_sign.into(),
        manifolds,
    };
    cfg.validate().map_err(CliError::Usage)?;
    let suites: Vec<Suite> = if !suites.is_empty() {
        suites.iter().map(|s| (*s).into()).collect()
    } else if let Some(names) = &run.suites {
        names
            .iter()
            .map(|n| Suite::parse(n).ok_or_else(|| CliError::Manifest(format!("unknown suite `{n}`"))))
            .collect::<Result<_, _>>()?
    } else {
        Suite::ALL.to_vec()
    };
    Ok((cfg, suites))
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(report: &PropertyReport, opts: &RunOpts, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let body = match opts.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text() + "\n",
    };
    match &opts.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            let _ = writeln!(out, "overall: {}", if report.pass { "PASS" } else { "FAIL" });
        }
        None => {
            let _ = out.write_all(body.as_bytes());
        }
    }
    Ok(())
}

fn catalog_listing() -> String {
    let mut s = String::new();
    for m in catalog::builtin() {
        let n = m.dim();
        let metric: Vec<String> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| format!("g_{}{} = {}", i + 1, j + 1, m.metric_expr(i, j)))
            .collect();
        let domain: Vec<String> = m
            .coords()
            .iter()
            .zip(m.base_box())
            .map(|(c, iv)| format!("{c} ∈ [{}, {}]", iv.lo, iv.hi))
            .collect();
        s.push_str(&format!(
            "{}  dim {}  coords ({})  {}  {}\n",
            m.name(),
            n,
            m.coords().join(", "),
            metric.join(", "),
            domain.join(", ")
        ));
    }
    s
}

/// Runs a parsed command, writing reports to `out`; returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let (report, opts) = match cli.command {
        Command::Catalog => {
            let _ = out.write_all(catalog_listing().as_bytes());
            return Ok(EXIT_PASS);
        }
        Command::Run { opts, suites } => {
            let (cfg, suites) = configure(&opts, &suites)?;
            let report = thread_pool()?.install(|| verify::run(&cfg, &suites))?;
            (report, opts)
        }
        Command::Check { id, opts } => {
            let (cfg, _) = configure(&opts, &[])?;
            let report = thread_pool()?.install(|| verify::run_single(&cfg, &id))?;
            (report, opts)
        }
    };
    emit(&report, &opts, out)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WARPED: &str = r#"
[[manifold]]
name = "warped"
dim = 2
coords = ["x", "y"]
fiber = [-2.0, 2.0]

[manifold.metric]
g_11 = "1 + x^2"
g_22 = "1"

[manifold.domain]
x = [-1.0, 1.0]
y = [-1.0, 1.0]

[run]
samples = 7
suites = ["theorem"]
"#;

    #[test]
    fn manifest_round_trip() {
        let (specs, run) = parse_manifest(WARPED, Path::new("m.toml")).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].name(), "warped");
        assert_eq!(specs[0].metric_expr(0, 1).to_string(), "0");
        assert_eq!(specs[0].metric_expr(0, 0).to_string(), "1 + x^2");
        assert_eq!(run.samples, Some(7));
    }

    #[test]
    fn metric_keys() {
        assert_eq!(metric_key("g_12", 2), Some((0, 1)));
        assert_eq!(metric_key("g_1_2", 2), Some((0, 1)));
        assert_eq!(metric_key("g_21", 2), None);
        assert_eq!(metric_key("g_13", 2), None);
        assert_eq!(metric_key("h_11", 2), None);
    }

    #[test]
    fn manifest_rejections() {
        let cases = [
            WARPED.replace("fiber = [-2.0, 2.0]", "colour = 3"),
            WARPED.replace("g_22", "g_21"),
            WARPED.replace("g_22 = \"1\"", ""),
            WARPED.replace("y = [-1.0, 1.0]", "z = [-1.0, 1.0]"),
            WARPED.replace("\"1 + x^2\"", "\"1 + z\""),
            WARPED.replace("dim = 2", "dim = 3"),
        ];
        for text in cases {
            let err = parse_manifest(&text, Path::new("m.toml")).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_USAGE, "{err}");
        }
    }

    #[test]
    fn single_table_form() {
        let text = WARPED.replace("[[manifold]]", "[manifold]");
        assert_eq!(parse_manifest(&text, Path::new("m.toml")).unwrap().0.len(), 1);
    }

    #[test]
    fn catalog_lists_every_builtin() {
        let s = catalog_listing();
        for name in ["flat2", "sphere2", "halfplane2"] {
            assert!(s.contains(name));
        }
        assert!(s.contains("dim 2"));
    }
}
