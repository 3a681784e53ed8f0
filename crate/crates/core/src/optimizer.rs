//! Maximisation of the secrecy transmission capacity over the jamming
//! parameters.
//!
//! Scalar problems run a uniform grid over `[0, 1]` (ends included) followed
//! by golden-section refinement inside the bracket of the best grid point.
//! The joint problems add a lattice over `(λ_T, λ_P)` under a total-density
//! budget and solve the scalar problem at every lattice point. Ties always go
//! to less jamming: smaller λ_P first, then the smaller knob.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::analytic::{nsee, stc, Analytic, TabulatedModel};
use crate::error::{Error, Result};
use crate::par::map_ordered;
use crate::params::{Scenario, Scheme, SystemParams};
use crate::quadrature::QuadratureConfig;

/// An STC objective over parameter points.
pub trait StcModel: Sync {
    fn stc(&self, params: &SystemParams, scheme: Scheme) -> Result<f64>;
}

impl StcModel for TabulatedModel {
    fn stc(&self, params: &SystemParams, scheme: Scheme) -> Result<f64> {
        TabulatedModel::stc(self, params, scheme)
    }
}

/// The adaptive engine, rebuilt at every point. Accurate and slow.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdaptiveModel {
    pub quadrature: QuadratureConfig,
}

impl StcModel for AdaptiveModel {
    fn stc(&self, params: &SystemParams, scheme: Scheme) -> Result<f64> {
        let a = Analytic::new(*params, self.quadrature)?;
        let pc = a.connection_probability(scheme, Scenario::General)?;
        let ps = a.secrecy_probability(scheme, Scenario::General)?;
        Ok(stc(pc, ps, params))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Points of the initial grid over `[0, 1]`.
    pub grid_points: usize,
    /// Golden-section iterations inside the best bracket.
    pub refinements: usize,
    /// Lattice steps per ε when `density_step` is unset.
    pub lattice_steps: usize,
    /// Fixed spacing of the `(λ_T, λ_P)` lattice. A spacing shared across
    /// budgets makes the feasible lattices nested.
    pub density_step: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { grid_points: 21, refinements: 24, lattice_steps: 10, density_step: None }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::param("grid_points", "must be at least 2"));
        }
        if self.lattice_steps == 0 {
            return Err(Error::param("lattice_steps", "must be at least 1"));
        }
        if let Some(step) = self.density_step {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::param("density_step", "must be positive and finite"));
            }
        }
        Ok(())
    }
}

/// A point of the search space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// ρ for SCJ, ϱ for PJ.
    pub jamming: f64,
    pub lambda_t: f64,
    pub lambda_p: f64,
}

impl OperatingPoint {
    pub fn apply(&self, params: &SystemParams, scheme: Scheme) -> SystemParams {
        SystemParams { lambda_t: self.lambda_t, lambda_p: self.lambda_p, ..params.with_jamming(scheme, self.jamming) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub scheme: Scheme,
    pub argmax: OperatingPoint,
    /// STC at `argmax`, bps/Hz/m².
    pub value: f64,
    /// Every evaluation, in evaluation order.
    pub trace: Vec<(OperatingPoint, f64)>,
}

impl OptimizationResult {
    /// Parameters at the optimum.
    pub fn params(&self, base: &SystemParams) -> SystemParams {
        self.argmax.apply(base, self.scheme)
    }
}

fn evaluate<M: StcModel + ?Sized>(model: &M, base: &SystemParams, scheme: Scheme, at: OperatingPoint) -> Result<f64> {
    model
        .stc(&at.apply(base, scheme), scheme)
        .map_err(|e| Error::Objective { at: at.jamming, source: Box::new(e) })
}

/// Whether `(x, v)` beats the incumbent: higher value, or equal value with
/// less jamming.
fn better(v: f64, x: f64, best: Option<(f64, f64)>) -> bool {
    match best {
        None => true,
        Some((bx, bv)) => v > bv || (v == bv && x < bx),
    }
}

/// Maximises over the jamming knob at fixed densities.
fn solve_scalar<M: StcModel + ?Sized>(
    model: &M,
    base: &SystemParams,
    scheme: Scheme,
    lambda_t: f64,
    lambda_p: f64,
    cfg: &SolverConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    let point = |x: f64| OperatingPoint { jamming: x, lambda_t, lambda_p };
    let n = cfg.grid_points;
    let grid: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let values = map_ordered(&grid, |&x| evaluate(model, base, scheme, point(x)));
    let mut trace = Vec::with_capacity(n + cfg.refinements + 2);
    for (&x, v) in grid.iter().zip(values) {
        trace.push((point(x), v?));
    }
    let mut best_i = 0;
    for i in 1..n {
        if trace[i].1 > trace[best_i].1 {
            best_i = i;
        }
    }
    if scheme != Scheme::None {
        let lo = grid[best_i.saturating_sub(1)];
        let hi = grid[(best_i + 1).min(n - 1)];
        golden_section(|x| evaluate(model, base, scheme, point(x)), lo, hi, cfg.refinements, &mut |x, v| {
            trace.push((point(x), v))
        })?;
    }
    let mut best: Option<(f64, f64)> = None;
    let mut argmax = trace[0].0;
    for &(p, v) in &trace {
        if better(v, p.jamming, best) {
            best = Some((p.jamming, v));
            argmax = p;
        }
    }
    let value = best.map_or(0.0, |b| b.1);
    Ok(OptimizationResult { scheme, argmax, value, trace })
}

/// Golden-section search for a maximum on `[lo, hi]`, reporting every
/// evaluation.
fn golden_section<F, R>(mut f: F, mut lo: f64, mut hi: f64, iterations: usize, record: &mut R) -> Result<()>
where
    F: FnMut(f64) -> Result<f64>,
    R: FnMut(f64, f64),
{
    if iterations == 0 || hi <= lo {
        return Ok(());
    }
    let inv_phi = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    record(x1, f1);
    let mut f2 = f(x2)?;
    record(x2, f2);
    for _ in 2..iterations {
        // Keep the left section on ties so the search drifts toward less jamming.
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
            record(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
            record(x2, f2);
        }
    }
    Ok(())
}

/// P1: the SCJ probability ρ maximising STC at the densities of `params`.
pub fn solve_p1<M: StcModel + ?Sized>(model: &M, params: &SystemParams, cfg: &SolverConfig) -> Result<OptimizationResult> {
    solve_scalar(model, params, Scheme::Scj, params.lambda_t, params.lambda_p, cfg)
}

/// P2: the PJ fraction ϱ maximising STC at the densities of `params`.
pub fn solve_p2<M: StcModel + ?Sized>(model: &M, params: &SystemParams, cfg: &SolverConfig) -> Result<OptimizationResult> {
    solve_scalar(model, params, Scheme::Pj, params.lambda_t, params.lambda_p, cfg)
}

/// P3: ρ, λ_T and λ_P jointly, with λ_T + λ_P ≤ ε.
pub fn solve_p3<M: StcModel + ?Sized>(
    model: &M,
    params: &SystemParams,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<OptimizationResult> {
    solve_budget(model, params, Scheme::Scj, epsilon, cfg)
}

/// P4: ϱ, λ_T and λ_P jointly, with λ_T + λ_P ≤ ε.
pub fn solve_p4<M: StcModel + ?Sized>(
    model: &M,
    params: &SystemParams,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<OptimizationResult> {
    solve_budget(model, params, Scheme::Pj, epsilon, cfg)
}

/// The `(λ_T, λ_P)` lattice points within the budget, λ_P-major so ties
/// resolve toward fewer potential jammers.
fn budget_lattice(epsilon: f64, cfg: &SolverConfig) -> Vec<(f64, f64)> {
    let step = cfg.density_step.unwrap_or(epsilon / cfg.lattice_steps as f64);
    // Tolerate rounding in k·step ≤ ε.
    let slack = 1e-9 * step;
    let count = libm::floor((epsilon + slack) / step) as usize;
    let mut out = Vec::new();
    for b in 0..=count {
        for a in 1..=count - b {
            out.push((a as f64 * step, b as f64 * step));
        }
    }
    out
}

fn solve_budget<M: StcModel + ?Sized>(
    model: &M,
    params: &SystemParams,
    scheme: Scheme,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", "must be finite and >= 0"));
    }
    let zero = OperatingPoint { jamming: 0.0, lambda_t: 0.0, lambda_p: 0.0 };
    let lattice = if epsilon > 0.0 { budget_lattice(epsilon, cfg) } else { Vec::new() };
    if lattice.is_empty() {
        return Ok(OptimizationResult { scheme, argmax: zero, value: 0.0, trace: Vec::new() });
    }
    let mut trace = Vec::new();
    let mut best: Option<OptimizationResult> = None;
    for (lambda_t, lambda_p) in lattice {
        let inner = solve_scalar(model, params, scheme, lambda_t, lambda_p, cfg)?;
        trace.extend_from_slice(&inner.trace);
        let wins = match &best {
            None => true,
            Some(b) => inner.value > b.value,
        };
        if wins {
            best = Some(inner);
        }
    }
    let best = best.expect("lattice is non-empty");
    Ok(OptimizationResult { scheme, argmax: best.argmax, value: best.value, trace })
}

/// NSEE at the optimum of P3 (SCJ) or P4 (PJ) for budget `epsilon`.
pub fn nsee_at_optimum<M: StcModel + ?Sized>(
    model: &M,
    params: &SystemParams,
    scheme: Scheme,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<(OptimizationResult, f64)> {
    let result = match scheme {
        Scheme::Pj => solve_p4(model, params, epsilon, cfg)?,
        _ => solve_budget(model, params, scheme, epsilon, cfg)?,
    };
    let at = result.params(params);
    let value = nsee(result.value, &at, scheme);
    Ok((result, value))
}
