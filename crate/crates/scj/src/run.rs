//! Experiment execution. Grid points run in parallel; results come back in
//! grid order.

use std::time::Instant;

use rayon::prelude::*;
use scj_core::analytic::{nsee, stc, Analytic, TableResolution, TabulatedModel};
use scj_core::montecarlo::{Estimate, SimulationConfig, Simulator};
use scj_core::optimizer::{
    nsee_at_optimum, solve_p1, solve_p2, AdaptiveModel, OptimizationResult, SolverConfig, StcModel,
};
use scj_core::quadrature::QuadratureConfig;
use scj_core::{Result as CoreResult, SystemParams};

use crate::config::{ExperimentConfig, Key, Metric, Mode, Objective, Problem};

/// Analytic values at one grid point. Missing entries were not requested.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnalyticValues {
    pub pc: Option<f64>,
    pub ps: Option<f64>,
    pub stc: Option<f64>,
    pub nsee: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McValues {
    pub pc: Option<Estimate>,
    pub ps: Option<Estimate>,
    pub stc: Option<f64>,
    pub nsee: Option<f64>,
}

/// Analytic-versus-simulation comparison of one row.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Check {
    pub pc_delta: Option<f64>,
    pub ps_delta: Option<f64>,
    /// Every |Δ| is within `tolerance + 3·half_width`.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: Vec<(Key, f64)>,
    pub analytic: Option<AnalyticValues>,
    pub mc: Option<McValues>,
    pub check: Option<Check>,
    pub error: Option<String>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<Row>,
}

impl SweepReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn out_of_tolerance(&self) -> usize {
        self.rows.iter().filter(|r| r.check.is_some_and(|c| !c.passed)).count()
    }
}

fn analytic_values(config: &ExperimentConfig, p: &SystemParams) -> CoreResult<AnalyticValues> {
    let a = Analytic::new(*p, QuadratureConfig::default())?;
    let pc = match config.has_metric(Metric::Pc) {
        true => Some(a.connection_probability(config.scheme, config.scenario)?),
        false => None,
    };
    let ps = match config.has_metric(Metric::Ps) {
        true => Some(a.secrecy_probability(config.scheme, config.scenario)?),
        false => None,
    };
    let stc = pc.zip(ps).map(|(c, s)| stc(c, s, p));
    Ok(AnalyticValues { pc, ps, stc, nsee: stc.map(|v| nsee(v, p, config.scheme)) })
}

fn mc_values(config: &ExperimentConfig, p: &SystemParams) -> CoreResult<McValues> {
    let sim = |trials| {
        let sc = SimulationConfig {
            scenario: config.scenario,
            scheme: config.scheme,
            trials,
            window_radius: config.window_radius,
            seed: config.seed,
        };
        Simulator::new(*p, sc)
    };
    let pc = match config.has_metric(Metric::Pc) {
        true => Some(sim(config.trials)?.estimate_pc()?),
        false => None,
    };
    let ps = match config.has_metric(Metric::Ps) {
        true => Some(sim(config.secrecy_trials)?.estimate_ps()?),
        false => None,
    };
    let stc = pc.zip(ps).map(|(c, s)| stc(c.mean, s.mean, p));
    Ok(McValues { pc, ps, stc, nsee: stc.map(|v| nsee(v, p, config.scheme)) })
}

fn check(tolerance: f64, a: &AnalyticValues, m: &McValues) -> Check {
    let delta = |x: Option<f64>, e: Option<Estimate>| x.zip(e).map(|(x, e)| (x - e.mean, e.half_width_95));
    let pc = delta(a.pc, m.pc);
    let ps = delta(a.ps, m.ps);
    let passed = [pc, ps].into_iter().flatten().all(|(d, hw)| d.abs() <= tolerance + 3.0 * hw);
    Check { pc_delta: pc.map(|x| x.0), ps_delta: ps.map(|x| x.0), passed }
}

fn row(config: &ExperimentConfig, index: usize) -> Row {
    let start = Instant::now();
    let point = config.grid_point(index);
    let p = config.params_at(&point);
    let mut out = Row { point, analytic: None, mc: None, check: None, error: None, wall_ms: None };
    let result = (|| -> CoreResult<()> {
        if config.engine.analytic() {
            out.analytic = Some(analytic_values(config, &p)?);
        }
        if config.engine.monte_carlo() {
            out.mc = Some(mc_values(config, &p)?);
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    if config.mode == Mode::Validate {
        if let (Some(a), Some(m)) = (&out.analytic, &out.mc) {
            out.check = Some(check(config.tolerance, a, m));
        }
    }
    if config.timing {
        out.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    out
}

/// Evaluates every grid point with the configured engines.
pub fn run_sweep(config: &ExperimentConfig) -> SweepReport {
    let rows = (0..config.grid_len()).into_par_iter().map(|i| row(config, i)).collect();
    SweepReport { rows }
}

/// [`run_sweep`] with both engines and a tolerance check per row.
pub fn run_validate(config: &ExperimentConfig) -> SweepReport {
    let config = ExperimentConfig { mode: Mode::Validate, engine: crate::config::Engine::Both, ..config.clone() };
    run_sweep(&config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumRow {
    pub point: Vec<(Key, f64)>,
    pub problem: Problem,
    pub epsilon: Option<f64>,
    pub result: Result<(OptimizationResult, f64), String>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub rows: Vec<OptimumRow>,
}

impl OptimizeReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }
}

fn solve(
    model: &dyn StcModel,
    p: &SystemParams,
    problem: Problem,
    epsilon: f64,
    cfg: &SolverConfig,
) -> CoreResult<(OptimizationResult, f64)> {
    let at_optimum = |r: OptimizationResult| {
        let value = nsee(r.value, &r.params(p), r.scheme);
        (r, value)
    };
    match problem {
        Problem::P1 => solve_p1(model, p, cfg).map(at_optimum),
        Problem::P2 => solve_p2(model, p, cfg).map(at_optimum),
        Problem::P3 | Problem::P4 => nsee_at_optimum(model, p, problem.scheme(), epsilon, cfg),
    }
}

/// Solves every configured problem at every grid point, grid-major.
pub fn run_optimize(config: &ExperimentConfig) -> CoreResult<OptimizeReport> {
    let settings = config.optimize.as_ref().expect("optimize settings are present in optimize mode");
    let table = match settings.objective {
        Objective::Tabulated => {
            Some(TabulatedModel::new(&Analytic::new(config.params, QuadratureConfig::default())?, TableResolution::default())?)
        }
        Objective::Adaptive => None,
    };
    let jobs: Vec<(usize, Problem)> =
        (0..config.grid_len()).flat_map(|i| settings.problems.iter().map(move |&q| (i, q))).collect();
    let rows = jobs
        .into_par_iter()
        .map(|(i, problem)| {
            let start = Instant::now();
            let point = config.grid_point(i);
            let p = config.params_at(&point);
            let epsilon = problem.budgeted().then(|| config.epsilon_at(&point).unwrap_or(0.0));
            let result = (|| {
                let local;
                let model: &dyn StcModel = match &table {
                    Some(t) if t.covers(&p) => t,
                    Some(_) => {
                        local = TabulatedModel::new(&Analytic::new(p, QuadratureConfig::default())?, TableResolution::default())?;
                        &local
                    }
                    None => &AdaptiveModel::default(),
                };
                solve(model, &p, problem, epsilon.unwrap_or(0.0), &settings.solver)
            })();
            OptimumRow {
                point,
                problem,
                epsilon,
                result: result.map_err(|e| e.to_string()),
                wall_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
            }
        })
        .collect();
    Ok(OptimizeReport { rows })
}
