//! Run configuration: suite selection, sample-plan bounds, parameter points,
//! and the file/flag resolution order (flags override file values, file
//! values override built-in defaults).

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;
use toroidal_core::galgebra::GAlgebra;
use toroidal_core::scalars::{parse_rat, rat, rat_int, Rat};

/// One identity suite. The string tokens are a stable external interface
/// (CLI flags, config files, report records); the variant names are for
/// code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// Rational/factorial scalar kernel: step-product recurrences, Pascal
    /// triangle, field arithmetic.
    Scalars,
    /// Step-factorial convolution identity.
    Lemma22,
    /// Step-factorial binomial expansion identity.
    Newton,
    /// The twelve generating-series bracket relations.
    Prop23,
    /// Jacobi identity on basis triples of the extended loop algebra.
    Jacobi,
    /// One-parameter-group axioms of the deformed flow series.
    Phi,
    /// Inverse-cofactor coefficients: closed form vs series inversion.
    HCoeffs,
    /// First correction coefficients of the inverse flow expansion.
    U1Corr,
    /// Normal-ordering shift identity and exponential-field conditions.
    FockConditions,
    /// Realization commutator residual (module axiom) on tensor words.
    Realization,
    /// Degree-zero action vs loop-space evaluation formulas.
    DegreeZero,
    /// Invariant bilinear form at the shifted convention point.
    FormEps1,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Scalars,
        Suite::Lemma22,
        Suite::Newton,
        Suite::Prop23,
        Suite::Jacobi,
        Suite::Phi,
        Suite::HCoeffs,
        Suite::U1Corr,
        Suite::FockConditions,
        Suite::Realization,
        Suite::DegreeZero,
        Suite::FormEps1,
    ];

    /// The stable selector token.
    pub fn token(self) -> &'static str {
        match self {
            Suite::Scalars => "scalars",
            Suite::Lemma22 => "lemma22",
            Suite::Newton => "newton",
            Suite::Prop23 => "prop23",
            Suite::Jacobi => "jacobi",
            Suite::Phi => "phi",
            Suite::HCoeffs => "hcoeffs",
            Suite::U1Corr => "u1corr",
            Suite::FockConditions => "fock_conditions",
            Suite::Realization => "realization",
            Suite::DegreeZero => "degree_zero",
            Suite::FormEps1 => "form_eps1",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL
            .into_iter()
            .find(|v| v.token() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

/// Output encoding of the final report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(ConfigError::UnknownFormat(other.to_string())),
        }
    }
}

/// One `(mu, ell, alpha, beta)` parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    pub mu: Rat,
    pub ell: Rat,
    pub alpha: Rat,
    pub beta: Rat,
}

impl ParamPoint {
    pub fn render(&self) -> String {
        format!(
            "mu={} ell={} alpha={} beta={}",
            self.mu, self.ell, self.alpha, self.beta
        )
    }
}

/// Field-level configuration diagnostics; any of these aborts the run
/// before any suite executes (process exit code 2).
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown suite token `{0}` (expected one of: scalars, lemma22, newton, prop23, jacobi, phi, hcoeffs, u1corr, fock_conditions, realization, degree_zero, form_eps1)")]
    UnknownSuite(String),
    #[error("unknown report format `{0}` (expected `text` or `json`)")]
    UnknownFormat(String),
    #[error("parameter point {index}: ell must be nonzero")]
    ZeroLevel { index: usize },
    #[error("parameter point {index}, field `{field}`: {message}")]
    BadPointField { index: usize, field: &'static str, message: String },
    #[error("field `{field}`: {message}")]
    BadField { field: &'static str, message: String },
    #[error("no {0} configured (the list may not be empty)")]
    EmptyList(&'static str),
    #[error("cannot read config file {path}: {message}")]
    UnreadableFile { path: String, message: String },
    #[error("config file {path}: {message}")]
    BadFile { path: String, message: String },
    #[error("coefficient algebra `{spec}`: {message}")]
    BadAlgebra { spec: String, message: String },
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Suites to execute, in declaration order, deduplicated.
    pub suites: Vec<Suite>,
    /// Convention shifts to sweep (integers).
    pub epsilon_values: Vec<i64>,
    /// Parameter points to sweep; every point must have `ell != 0`.
    pub parameter_points: Vec<ParamPoint>,
    /// Exhaustive index-box half-width for loop/coefficient indices.
    pub index_box: i64,
    /// Maximum total degree of module test vectors.
    pub degree_cap: usize,
    /// Truncation order for formal-series suites.
    pub truncation_order: u32,
    /// Seed for the deterministic test-vector sampler.
    pub rng_seed: u64,
    pub report_format: ReportFormat,
    /// Coefficient algebra for the module suites (`fock_conditions`,
    /// `realization`, `degree_zero`). The structural suites additionally
    /// sweep the built-in algebras on their own.
    pub algebra: Arc<GAlgebra>,
    /// When set, the named suite runs with its documented fault injection
    /// enabled and is expected to report failures.
    pub fault_inject: Option<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            epsilon_values: (-2..=3).collect(),
            parameter_points: vec![
                ParamPoint { mu: rat(1, 3), ell: rat_int(2), alpha: rat(1, 5), beta: rat_int(7) },
                ParamPoint {
                    mu: rat(-1, 2),
                    ell: rat_int(-3),
                    alpha: rat(2, 3),
                    beta: rat(-1, 4),
                },
            ],
            index_box: 3,
            degree_cap: 2,
            truncation_order: 8,
            rng_seed: 17,
            report_format: ReportFormat::Text,
            algebra: GAlgebra::sl2(),
            fault_inject: None,
        }
    }
}

impl SuiteConfig {
    /// Reject invalid field combinations with a field-level diagnostic.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.suites.is_empty() {
            return Err(ConfigError::EmptyList("suites"));
        }
        if self.epsilon_values.is_empty() {
            return Err(ConfigError::EmptyList("epsilon values"));
        }
        if self.parameter_points.is_empty() {
            return Err(ConfigError::EmptyList("parameter points"));
        }
        for (index, p) in self.parameter_points.iter().enumerate() {
            if p.ell == rat_int(0) {
                return Err(ConfigError::ZeroLevel { index });
            }
        }
        if self.index_box < 0 {
            return Err(ConfigError::BadField {
                field: "index_box",
                message: "must be nonnegative".into(),
            });
        }
        Ok(())
    }
}

/// On-disk configuration document (TOML). All keys optional; omitted keys
/// keep their defaults. Example:
///
/// ```toml
/// suites = ["lemma22", "newton"]
/// epsilon = [-2, -1, 0, 1, 2, 3]
/// index_box = 3
/// degree_cap = 2
/// order = 8
/// seed = 17
/// report = "json"
/// algebra = "sl2"          # or a TOML descriptor path
/// # fault_inject = "realization"
///
/// [[point]]
/// mu = "1/3"
/// ell = "2"
/// alpha = "1/5"
/// beta = "7"
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    suites: Option<Vec<String>>,
    epsilon: Option<Vec<i64>>,
    point: Option<Vec<PointDoc>>,
    index_box: Option<i64>,
    degree_cap: Option<usize>,
    order: Option<u32>,
    seed: Option<u64>,
    report: Option<String>,
    algebra: Option<String>,
    fault_inject: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    mu: String,
    ell: String,
    alpha: String,
    beta: String,
}

/// Unresolved command-line values; `None` means "not given".
#[derive(Debug, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub epsilon: Vec<i64>,
    pub mu: Option<String>,
    pub ell: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub index_box: Option<i64>,
    pub degree_cap: Option<usize>,
    pub order: Option<u32>,
    pub seed: Option<u64>,
    pub report: Option<String>,
    pub algebra: Option<String>,
    pub fault_inject: Option<String>,
}

fn parse_point_field(
    index: usize,
    field: &'static str,
    raw: &str,
) -> Result<Rat, ConfigError> {
    parse_rat(raw).map_err(|e| ConfigError::BadPointField {
        index,
        field,
        message: e.to_string(),
    })
}

fn parse_suites(tokens: &[String]) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for t in tokens {
        let s: Suite = t.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Resolve the effective configuration: defaults, then the config file (if
/// any), then command-line overrides; validate the result.
pub fn resolve(file: Option<&Path>, ov: &Overrides) -> Result<SuiteConfig, ConfigError> {
    let mut cfg = SuiteConfig::default();

    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::UnreadableFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let doc: FileDoc = toml::from_str(&text).map_err(|e| ConfigError::BadFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if let Some(s) = &doc.suites {
            cfg.suites = parse_suites(s)?;
        }
        if let Some(e) = doc.epsilon {
            cfg.epsilon_values = e;
        }
        if let Some(points) = doc.point {
            cfg.parameter_points = points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    Ok(ParamPoint {
                        mu: parse_point_field(i, "mu", &p.mu)?,
                        ell: parse_point_field(i, "ell", &p.ell)?,
                        alpha: parse_point_field(i, "alpha", &p.alpha)?,
                        beta: parse_point_field(i, "beta", &p.beta)?,
                    })
                })
                .collect::<Result<_, ConfigError>>()?;
        }
        if let Some(v) = doc.index_box {
            cfg.index_box = v;
        }
        if let Some(v) = doc.degree_cap {
            cfg.degree_cap = v;
        }
        if let Some(v) = doc.order {
            cfg.truncation_order = v;
        }
        if let Some(v) = doc.seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = &doc.report {
            cfg.report_format = v.parse()?;
        }
        if let Some(v) = &doc.algebra {
            cfg.algebra = load_algebra(v)?;
        }
        if let Some(v) = &doc.fault_inject {
            cfg.fault_inject = Some(v.parse()?);
        }
    }

    if !ov.suites.is_empty() {
        cfg.suites = parse_suites(&ov.suites)?;
    }
    if !ov.epsilon.is_empty() {
        cfg.epsilon_values = ov.epsilon.clone();
    }
    // Any scalar flag collapses the parameter sweep to a single point: the
    // first configured point patched with the given fields.
    if ov.mu.is_some() || ov.ell.is_some() || ov.alpha.is_some() || ov.beta.is_some() {
        let mut p = cfg.parameter_points[0].clone();
        if let Some(raw) = &ov.mu {
            p.mu = parse_point_field(0, "mu", raw)?;
        }
        if let Some(raw) = &ov.ell {
            p.ell = parse_point_field(0, "ell", raw)?;
        }
        if let Some(raw) = &ov.alpha {
            p.alpha = parse_point_field(0, "alpha", raw)?;
        }
        if let Some(raw) = &ov.beta {
            p.beta = parse_point_field(0, "beta", raw)?;
        }
        cfg.parameter_points = vec![p];
    }
    if let Some(v) = ov.index_box {
        cfg.index_box = v;
    }
    if let Some(v) = ov.degree_cap {
        cfg.degree_cap = v;
    }
    if let Some(v) = ov.order {
        cfg.truncation_order = v;
    }
    if let Some(v) = ov.seed {
        cfg.rng_seed = v;
    }
    if let Some(v) = &ov.report {
        cfg.report_format = v.parse()?;
    }
    if let Some(v) = &ov.algebra {
        cfg.algebra = load_algebra(v)?;
    }
    if let Some(v) = &ov.fault_inject {
        cfg.fault_inject = Some(v.parse()?);
    }

    cfg.validate()?;
    Ok(cfg)
}

fn load_algebra(spec: &str) -> Result<Arc<GAlgebra>, ConfigError> {
    GAlgebra::load(spec).map_err(|e| ConfigError::BadAlgebra {
        spec: spec.to_string(),
        message: e.to_string(),
    })
}
