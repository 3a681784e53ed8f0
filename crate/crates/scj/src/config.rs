//! Experiment configuration: TOML in, validated [`ExperimentConfig`] out.

use std::fmt;
use std::path::{Path, PathBuf};

use scj_core::optimizer::SolverConfig;
use scj_core::params::Antenna;
use scj_core::{Error as CoreError, Scenario, Scheme, SystemParams};
use serde::{Deserialize, Serialize};

use crate::units::{Dimension, Quantity, UnitError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// Malformed TOML or an unknown or mistyped key at `path`.
    #[error("{path}: {source}")]
    Syntax { path: String, source: toml::de::Error },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError::Invalid { key: key.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Validate,
    Sweep,
    Optimize,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Validate => "validate",
            Mode::Sweep => "sweep",
            Mode::Optimize => "optimize",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Analytic,
    #[serde(alias = "montecarlo")]
    #[value(alias = "montecarlo")]
    Mc,
    Both,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Mc => "mc",
            Engine::Both => "both",
        }
    }

    pub fn analytic(self) -> bool {
        self != Engine::Mc
    }

    pub fn monte_carlo(self) -> bool {
        self != Engine::Analytic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Connection probability.
    Pc,
    /// Secrecy probability.
    Ps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// ρ at fixed densities (SCJ).
    P1,
    /// ϱ at fixed densities (PJ).
    P2,
    /// ρ, λ_T, λ_P under λ_T + λ_P ≤ ε (SCJ).
    P3,
    /// ϱ, λ_T, λ_P under λ_T + λ_P ≤ ε (PJ).
    P4,
}

impl Problem {
    pub fn scheme(self) -> Scheme {
        match self {
            Problem::P1 | Problem::P3 => Scheme::Scj,
            Problem::P2 | Problem::P4 => Scheme::Pj,
        }
    }

    pub fn budgeted(self) -> bool {
        matches!(self, Problem::P3 | Problem::P4)
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::P1 => "p1",
            Problem::P2 => "p2",
            Problem::P3 => "p3",
            Problem::P4 => "p4",
        }
    }
}

/// Objective used by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Transforms tabulated once on fixed nodes; fast.
    #[default]
    Tabulated,
    /// Adaptive quadrature at every point.
    Adaptive,
}

fn scheme_from_name(name: &str) -> Option<Scheme> {
    Scheme::ALL.into_iter().find(|s| s.name() == name)
}

fn scenario_from_name(name: &str) -> Option<Scenario> {
    [Scenario::Simplified, Scenario::General].into_iter().find(|s| s.name() == name)
}

/// A scalar of [`SystemParams`] (or the density budget ε) addressable from
/// a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    LambdaT,
    LambdaP,
    LambdaE,
    Rho,
    Varrho,
    R0,
    D,
    PLos,
    AlphaLos,
    AlphaNlos,
    NLos,
    NNlos,
    Power,
    Sigma2,
    Beamwidth,
    MainGain,
    BackGain,
    RateT,
    RateE,
    Beta,
    Epsilon,
}

impl Key {
    pub const PARAMS: [Key; 20] = [
        Key::LambdaT,
        Key::LambdaP,
        Key::LambdaE,
        Key::Rho,
        Key::Varrho,
        Key::R0,
        Key::D,
        Key::PLos,
        Key::AlphaLos,
        Key::AlphaNlos,
        Key::NLos,
        Key::NNlos,
        Key::Power,
        Key::Sigma2,
        Key::Beamwidth,
        Key::MainGain,
        Key::BackGain,
        Key::RateT,
        Key::RateE,
        Key::Beta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Key::LambdaT => "lambda_t",
            Key::LambdaP => "lambda_p",
            Key::LambdaE => "lambda_e",
            Key::Rho => "rho",
            Key::Varrho => "varrho",
            Key::R0 => "r0",
            Key::D => "d",
            Key::PLos => "p_los",
            Key::AlphaLos => "alpha_los",
            Key::AlphaNlos => "alpha_nlos",
            Key::NLos => "n_los",
            Key::NNlos => "n_nlos",
            Key::Power => "power",
            Key::Sigma2 => "sigma2",
            Key::Beamwidth => "beamwidth",
            Key::MainGain => "main_gain",
            Key::BackGain => "back_gain",
            Key::RateT => "rate_t",
            Key::RateE => "rate_e",
            Key::Beta => "beta",
            Key::Epsilon => "epsilon",
        }
    }

    pub fn from_name(name: &str) -> Option<Key> {
        Key::PARAMS.into_iter().chain([Key::Epsilon]).find(|k| k.name() == name)
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Key::R0 | Key::D => Dimension::Length,
            Key::Power | Key::Sigma2 => Dimension::Power,
            Key::Beamwidth => Dimension::Angle,
            Key::MainGain | Key::BackGain => Dimension::Ratio,
            _ => Dimension::Plain,
        }
    }

    pub fn get(self, p: &SystemParams) -> f64 {
        match self {
            Key::LambdaT => p.lambda_t,
            Key::LambdaP => p.lambda_p,
            Key::LambdaE => p.lambda_e,
            Key::Rho => p.rho,
            Key::Varrho => p.varrho,
            Key::R0 => p.r0,
            Key::D => p.d,
            Key::PLos => p.p_los,
            Key::AlphaLos => p.alpha_los,
            Key::AlphaNlos => p.alpha_nlos,
            Key::NLos => p.n_los as f64,
            Key::NNlos => p.n_nlos as f64,
            Key::Power => p.power,
            Key::Sigma2 => p.sigma2,
            Key::Beamwidth => p.tx.beamwidth,
            Key::MainGain => p.tx.main,
            Key::BackGain => p.tx.back,
            Key::RateT => p.rate_t,
            Key::RateE => p.rate_e,
            Key::Beta => p.beta,
            Key::Epsilon => f64::NAN,
        }
    }

    /// Writes `v` into `p`. Antenna keys set all three roles. `Epsilon` is
    /// not a model parameter and is ignored here.
    pub fn set(self, p: &mut SystemParams, v: f64) -> Result<(), String> {
        let count = |v: f64| -> Result<u32, String> {
            if v.fract() == 0.0 && (1.0..=64.0).contains(&v) {
                Ok(v as u32)
            } else {
                Err(format!("expected an integer in [1, 64], got {v}"))
            }
        };
        let antennas = |p: &mut SystemParams, f: &dyn Fn(&mut Antenna)| {
            for a in [&mut p.tx, &mut p.rx, &mut p.eve] {
                f(a);
            }
        };
        match self {
            Key::LambdaT => p.lambda_t = v,
            Key::LambdaP => p.lambda_p = v,
            Key::LambdaE => p.lambda_e = v,
            Key::Rho => p.rho = v,
            Key::Varrho => p.varrho = v,
            Key::R0 => p.r0 = v,
            Key::D => p.d = v,
            Key::PLos => p.p_los = v,
            Key::AlphaLos => p.alpha_los = v,
            Key::AlphaNlos => p.alpha_nlos = v,
            Key::NLos => p.n_los = count(v)?,
            Key::NNlos => p.n_nlos = count(v)?,
            Key::Power => p.power = v,
            Key::Sigma2 => p.sigma2 = v,
            Key::Beamwidth => antennas(p, &|a| a.beamwidth = v),
            Key::MainGain => antennas(p, &|a| a.main = v),
            Key::BackGain => antennas(p, &|a| a.back = v),
            Key::RateT => p.rate_t = v,
            Key::RateE => p.rate_e = v,
            Key::Beta => p.beta = v,
            Key::Epsilon => {}
        }
        Ok(())
    }

    /// Config key behind a parameter name reported by the model.
    fn from_model_name(name: &str) -> Option<Key> {
        Some(match name {
            "lambda_T" => Key::LambdaT,
            "lambda_P" => Key::LambdaP,
            "lambda_E" => Key::LambdaE,
            "rho" => Key::Rho,
            "varrho" => Key::Varrho,
            "p_L" => Key::PLos,
            "beta" => Key::Beta,
            "D" => Key::D,
            "r0" => Key::R0,
            "alpha_L" => Key::AlphaLos,
            "alpha_N" => Key::AlphaNlos,
            "N_L" => Key::NLos,
            "N_N" => Key::NNlos,
            "P" => Key::Power,
            "sigma2" => Key::Sigma2,
            "theta_T" | "theta_R" | "theta_E" => Key::Beamwidth,
            "G_T" | "G_R" | "G_E" => Key::MainGain,
            "g_T" | "g_R" | "g_E" => Key::BackGain,
            "R_t" => Key::RateT,
            "R_e" => Key::RateE,
            _ => return None,
        })
    }
}

/// One sweep axis: one or more keys stepped together.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub keys: Vec<Key>,
    /// `points[i][k]` is the value of `keys[k]` at step `i`.
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeSettings {
    /// Solved in order at every grid point.
    pub problems: Vec<Problem>,
    pub epsilon: f64,
    pub solver: SolverConfig,
    pub objective: Objective,
    /// Include every objective evaluation in the report.
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub scheme: Scheme,
    pub scenario: Scenario,
    pub engine: Engine,
    pub seed: u64,
    /// Monte Carlo trials for the connection probability.
    pub trials: u64,
    /// Monte Carlo trials for the secrecy probability.
    pub secrecy_trials: u64,
    pub window_radius: f64,
    pub tolerance: f64,
    pub metrics: Vec<Metric>,
    /// Add a wall-time column. Off by default so output stays reproducible.
    pub timing: bool,
    pub params: SystemParams,
    pub sweep: Vec<Axis>,
    pub optimize: Option<OptimizeSettings>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Number of grid points: the product of the axis lengths.
    pub fn grid_len(&self) -> usize {
        self.sweep.iter().map(|a| a.points.len()).product()
    }

    /// Grid point `index` in row-major order, first axis outermost.
    pub fn grid_point(&self, mut index: usize) -> Vec<(Key, f64)> {
        let mut steps = vec![0; self.sweep.len()];
        for (i, axis) in self.sweep.iter().enumerate().rev() {
            steps[i] = index % axis.points.len();
            index /= axis.points.len();
        }
        self.sweep
            .iter()
            .zip(steps)
            .flat_map(|(axis, s)| axis.keys.iter().copied().zip(axis.points[s].iter().copied()))
            .collect()
    }

    /// Base parameters with a grid point applied.
    pub fn params_at(&self, point: &[(Key, f64)]) -> SystemParams {
        let mut p = self.params;
        for &(k, v) in point {
            k.set(&mut p, v).expect("grid values are checked at load time");
        }
        p
    }

    pub fn epsilon_at(&self, point: &[(Key, f64)]) -> Option<f64> {
        point
            .iter()
            .find(|(k, _)| *k == Key::Epsilon)
            .map(|&(_, v)| v)
            .or(self.optimize.as_ref().map(|o| o.epsilon))
    }

    pub fn has_metric(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    /// The configuration as TOML with every quantity in base units.
    pub fn to_toml(&self) -> String {
        let raw = RawConfig::from(self);
        toml::to_string(&raw).expect("config serializes")
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    parse_config(&read(path)?)
}

/// Loads a config for a run in `mode`. A file may omit `mode` but must not
/// name a different one.
pub fn load_config_for(path: &Path, mode: Mode) -> Result<ExperimentConfig, ConfigError> {
    parse_config_for(&read(path)?, mode)
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })
}

fn parse_raw(text: &str) -> Result<RawConfig, ConfigError> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Syntax { path, source: e.into_inner() }
    })
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw = parse_raw(text)?;
    let mode = raw.mode.ok_or_else(|| ConfigError::invalid("mode", "missing; expected validate, sweep or optimize"))?;
    raw.normalize(mode)
}

pub fn parse_config_for(text: &str, mode: Mode) -> Result<ExperimentConfig, ConfigError> {
    let raw = parse_raw(text)?;
    match raw.mode {
        Some(m) if m != mode => {
            Err(ConfigError::invalid("mode", format!("file is for {}, not {}", m.name(), mode.name())))
        }
        _ => raw.normalize(mode),
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_t: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_p: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_e: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    varrho: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r0: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_los: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_los: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_nlos: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_los: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_nlos: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    power: Option<Quantity>,
    /// Noise power. Exclusive with `noise_density`.
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma2: Option<Quantity>,
    /// Noise spectral density, multiplied by `bandwidth`.
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_density: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bandwidth: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beamwidth: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    main_gain: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    back_gain: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate_t: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate_e: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<Quantity>,
}

impl RawParams {
    fn field(&self, key: Key) -> Option<&Quantity> {
        match key {
            Key::LambdaT => self.lambda_t.as_ref(),
            Key::LambdaP => self.lambda_p.as_ref(),
            Key::LambdaE => self.lambda_e.as_ref(),
            Key::Rho => self.rho.as_ref(),
            Key::Varrho => self.varrho.as_ref(),
            Key::R0 => self.r0.as_ref(),
            Key::D => self.d.as_ref(),
            Key::PLos => self.p_los.as_ref(),
            Key::AlphaLos => self.alpha_los.as_ref(),
            Key::AlphaNlos => self.alpha_nlos.as_ref(),
            Key::NLos => self.n_los.as_ref(),
            Key::NNlos => self.n_nlos.as_ref(),
            Key::Power => self.power.as_ref(),
            Key::Sigma2 => self.sigma2.as_ref(),
            Key::Beamwidth => self.beamwidth.as_ref(),
            Key::MainGain => self.main_gain.as_ref(),
            Key::BackGain => self.back_gain.as_ref(),
            Key::RateT => self.rate_t.as_ref(),
            Key::RateE => self.rate_e.as_ref(),
            Key::Beta => self.beta.as_ref(),
            Key::Epsilon => None,
        }
    }

    fn from_params(p: &SystemParams) -> Self {
        let q = |k: Key| Some(Quantity::Number(k.get(p)));
        RawParams {
            lambda_t: q(Key::LambdaT),
            lambda_p: q(Key::LambdaP),
            lambda_e: q(Key::LambdaE),
            rho: q(Key::Rho),
            varrho: q(Key::Varrho),
            r0: q(Key::R0),
            d: q(Key::D),
            p_los: q(Key::PLos),
            alpha_los: q(Key::AlphaLos),
            alpha_nlos: q(Key::AlphaNlos),
            n_los: q(Key::NLos),
            n_nlos: q(Key::NNlos),
            power: q(Key::Power),
            sigma2: q(Key::Sigma2),
            noise_density: None,
            bandwidth: None,
            beamwidth: q(Key::Beamwidth),
            main_gain: q(Key::MainGain),
            back_gain: q(Key::BackGain),
            rate_t: q(Key::RateT),
            rate_e: q(Key::RateE),
            beta: q(Key::Beta),
        }
    }

    fn resolve(&self) -> Result<SystemParams, ConfigError> {
        let mut p = SystemParams::default();
        let value = |key: &str, q: &Quantity, dim: Dimension| {
            q.resolve(dim).map_err(|e: UnitError| ConfigError::invalid(format!("params.{key}"), e))
        };
        for key in Key::PARAMS {
            if let Some(q) = self.field(key) {
                let v = value(key.name(), q, key.dimension())?;
                key.set(&mut p, v).map_err(|e| ConfigError::invalid(format!("params.{}", key.name()), e))?;
            }
        }
        match (&self.noise_density, &self.bandwidth) {
            (Some(_), _) if self.sigma2.is_some() => {
                return Err(ConfigError::invalid("params.noise_density", "give either sigma2 or noise_density"));
            }
            (Some(n0), Some(b)) => {
                p.sigma2 = value("noise_density", n0, Dimension::PowerDensity)?
                    * value("bandwidth", b, Dimension::Frequency)?;
            }
            (Some(_), None) => return Err(ConfigError::invalid("params.bandwidth", "required with noise_density")),
            (None, Some(_)) => return Err(ConfigError::invalid("params.noise_density", "required with bandwidth")),
            (None, None) => {}
        }
        Ok(p)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimize {
    problem: Problems,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refinements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    density_step: Option<f64>,
    #[serde(default)]
    objective: Objective,
    #[serde(default = "yes")]
    trace: bool,
}

/// One problem or a list of them.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Problems {
    One(Problem),
    Many(Vec<Problem>),
}

fn yes() -> bool {
    true
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<Format>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<String>,
    #[serde(default)]
    engine: Engine,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secrecy_trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_radius: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<Vec<Metric>>,
    #[serde(default)]
    timing: bool,
    #[serde(default)]
    params: RawParams,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sweep: Vec<toml::Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimize: Option<RawOptimize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SECRECY_TRIALS: u64 = 100_000;
pub const DEFAULT_WINDOW_RADIUS: f64 = 500.0;
pub const DEFAULT_TOLERANCE: f64 = 0.05;

fn model_error(e: CoreError, prefix: &str) -> ConfigError {
    match e {
        CoreError::InvalidParameter { name, reason } => {
            let key = Key::from_model_name(name).map_or(name, Key::name);
            ConfigError::invalid(format!("{prefix}{key}"), reason)
        }
        other => ConfigError::invalid(prefix.trim_end_matches('.'), other),
    }
}

fn parse_axis(index: usize, table: &toml::Table, mode: Mode) -> Result<Axis, ConfigError> {
    let at = |key: &str| format!("sweep[{index}].{key}");
    if table.is_empty() {
        return Err(ConfigError::invalid(format!("sweep[{index}]"), "axis names no parameter"));
    }
    let mut keys = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (name, value) in table {
        let key = Key::from_name(name).ok_or_else(|| ConfigError::invalid(at(name), "unknown parameter"))?;
        if key == Key::Epsilon && mode != Mode::Optimize {
            return Err(ConfigError::invalid(at(name), "only optimize runs sweep the density budget"));
        }
        let values: Vec<Quantity> = value
            .clone()
            .try_into()
            .map_err(|_| ConfigError::invalid(at(name), "expected an array of numbers or quantities"))?;
        let column = values
            .iter()
            .map(|q| q.resolve(key.dimension()))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| ConfigError::invalid(at(name), e))?;
        if column.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(ConfigError::invalid(at(name), "values must be strictly increasing"));
        }
        if let Some(first) = columns.first() {
            if first.len() != column.len() {
                return Err(ConfigError::invalid(at(name), "all parameters of one axis need the same number of values"));
            }
        }
        keys.push(key);
        columns.push(column);
    }
    let points = (0..columns[0].len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    Ok(Axis { keys, points })
}

impl RawConfig {
    fn normalize(self, mode: Mode) -> Result<ExperimentConfig, ConfigError> {
        let params = self.params.resolve()?;
        params.validate().map_err(|e| model_error(e, "params."))?;

        let optimize = match self.optimize {
            Some(o) if mode == Mode::Optimize => {
                let mut solver = SolverConfig { density_step: o.density_step, ..SolverConfig::default() };
                solver.grid_points = o.grid_points.unwrap_or(solver.grid_points);
                solver.refinements = o.refinements.unwrap_or(solver.refinements);
                solver.lattice_steps = o.lattice_steps.unwrap_or(solver.lattice_steps);
                if solver.grid_points < 2 {
                    return Err(ConfigError::invalid("optimize.grid_points", "must be at least 2"));
                }
                if solver.lattice_steps == 0 {
                    return Err(ConfigError::invalid("optimize.lattice_steps", "must be at least 1"));
                }
                if solver.density_step.is_some_and(|s| !(s > 0.0 && s.is_finite())) {
                    return Err(ConfigError::invalid("optimize.density_step", "must be positive and finite"));
                }
                let epsilon = o.epsilon.unwrap_or(0.0);
                if !(epsilon >= 0.0 && epsilon.is_finite()) {
                    return Err(ConfigError::invalid("optimize.epsilon", "must be finite and >= 0"));
                }
                let problems = match o.problem {
                    Problems::One(p) => vec![p],
                    Problems::Many(ps) => ps,
                };
                if problems.is_empty() {
                    return Err(ConfigError::invalid("optimize.problem", "list at least one of p1, p2, p3, p4"));
                }
                if problems.iter().enumerate().any(|(i, p)| problems[..i].contains(p)) {
                    return Err(ConfigError::invalid("optimize.problem", "problems must be distinct"));
                }
                Some(OptimizeSettings { problems, epsilon, solver, objective: o.objective, trace: o.trace })
            }
            Some(_) => return Err(ConfigError::invalid("optimize", "only allowed with mode = \"optimize\"")),
            None if mode == Mode::Optimize => {
                return Err(ConfigError::invalid("optimize", "required with mode = \"optimize\""));
            }
            None => None,
        };

        let scheme = match (&self.scheme, &optimize) {
            (Some(name), _) => {
                let s = scheme_from_name(name)
                    .ok_or_else(|| ConfigError::invalid("scheme", "expected one of scj, pj, scj-q, none"))?;
                if let Some(o) = &optimize {
                    if let Some(p) = o.problems.iter().find(|p| p.scheme() != s) {
                        return Err(ConfigError::invalid(
                            "scheme",
                            format!("problem {} optimizes {}", p.name(), p.scheme().name()),
                        ));
                    }
                }
                s
            }
            (None, Some(o)) => o.problems[0].scheme(),
            (None, None) => Scheme::Scj,
        };
        let scenario = match &self.scenario {
            Some(name) => scenario_from_name(name)
                .ok_or_else(|| ConfigError::invalid("scenario", "expected simplified or general"))?,
            None => Scenario::General,
        };
        if optimize.is_some() && scenario != Scenario::General {
            return Err(ConfigError::invalid("scenario", "the optimizer works on the general scenario"));
        }

        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        let secrecy_trials = self.secrecy_trials.or(self.trials).unwrap_or(DEFAULT_SECRECY_TRIALS);
        if trials == 0 {
            return Err(ConfigError::invalid("trials", "must be at least 1"));
        }
        if secrecy_trials == 0 {
            return Err(ConfigError::invalid("secrecy_trials", "must be at least 1"));
        }
        let window_radius = match &self.window_radius {
            Some(q) => q.resolve(Dimension::Length).map_err(|e| ConfigError::invalid("window_radius", e))?,
            None => DEFAULT_WINDOW_RADIUS,
        };
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(ConfigError::invalid("tolerance", "must be positive and finite"));
        }
        let metrics = self.metrics.unwrap_or_else(|| vec![Metric::Pc, Metric::Ps]);
        if metrics.is_empty() {
            return Err(ConfigError::invalid("metrics", "list at least one of pc, ps"));
        }
        let engine = if mode == Mode::Validate { Engine::Both } else { self.engine };

        let sweep = self
            .sweep
            .iter()
            .enumerate()
            .map(|(i, t)| parse_axis(i, t, mode))
            .collect::<Result<Vec<_>, _>>()?;
        let config = ExperimentConfig {
            mode,
            scheme,
            scenario,
            engine,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            trials,
            secrecy_trials,
            window_radius,
            tolerance,
            metrics,
            timing: self.timing,
            params,
            sweep,
            optimize,
            output: self.output.as_ref().and_then(|o| o.path.clone()),
            format: self.output.as_ref().and_then(|o| o.format).unwrap_or(match mode {
                Mode::Optimize => Format::Json,
                _ => Format::Csv,
            }),
        };
        if config.mode == Mode::Optimize && config.format != Format::Json {
            return Err(ConfigError::invalid("output.format", "optimize reports are JSON"));
        }
        if engine.monte_carlo() && !(window_radius > params.r0 && window_radius.is_finite()) {
            return Err(ConfigError::invalid("window_radius", "must be finite and exceed r0"));
        }
        for i in 0..config.grid_len() {
            let point = config.grid_point(i);
            let p = config.params_at(&point);
            let label: Vec<String> = point.iter().map(|(k, v)| format!("{}={v}", k.name())).collect();
            p.validate().map_err(|e| model_error(e, &format!("sweep point {{{}}}: ", label.join(", "))))?;
            if let Some(eps) = config.epsilon_at(&point) {
                if !(eps >= 0.0 && eps.is_finite()) {
                    return Err(ConfigError::invalid("sweep.epsilon", "must be finite and >= 0"));
                }
            }
        }
        Ok(config)
    }
}

impl From<&ExperimentConfig> for RawConfig {
    fn from(c: &ExperimentConfig) -> Self {
        let sweep = c
            .sweep
            .iter()
            .map(|axis| {
                let mut t = toml::Table::new();
                for (k, key) in axis.keys.iter().enumerate() {
                    let column: Vec<toml::Value> = axis.points.iter().map(|p| toml::Value::Float(p[k])).collect();
                    t.insert(key.name().to_owned(), toml::Value::Array(column));
                }
                t
            })
            .collect();
        RawConfig {
            mode: Some(c.mode),
            // Optimize runs take the scheme from their problems.
            scheme: c.optimize.is_none().then(|| c.scheme.name().to_owned()),
            scenario: Some(c.scenario.name().to_owned()),
            engine: c.engine,
            seed: Some(c.seed),
            trials: Some(c.trials),
            secrecy_trials: Some(c.secrecy_trials),
            window_radius: Some(Quantity::Number(c.window_radius)),
            tolerance: Some(c.tolerance),
            metrics: Some(c.metrics.clone()),
            timing: c.timing,
            params: RawParams::from_params(&c.params),
            sweep,
            optimize: c.optimize.as_ref().map(|o| RawOptimize {
                problem: Problems::Many(o.problems.clone()),
                epsilon: Some(o.epsilon),
                grid_points: Some(o.solver.grid_points),
                refinements: Some(o.solver.refinements),
                lattice_steps: Some(o.solver.lattice_steps),
                density_step: o.solver.density_step,
                objective: o.objective,
                trace: o.trace,
            }),
            output: Some(RawOutput { path: c.output.clone(), format: Some(c.format) }),
        }
    }
}
