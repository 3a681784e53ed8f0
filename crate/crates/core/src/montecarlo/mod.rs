//! Monte Carlo estimation of connection and secrecy probability.
//!
//! Trials are independent: trial `t` of seed `s` always sees the same network,
//! whatever the thread count or batch schedule. Indicator estimators reduce
//! integer counts; mean estimators reduce per-batch sums in batch order.

mod oracle;

pub use oracle::{empirical_laplace, empirical_laplace_many, InterfererConfig};

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::par::map_batches;
use crate::params::{Scenario, Scheme, SystemParams};
use crate::point_process::{GridIndex, LinkModel, NetworkRealization, NodeId};

/// Trials per parallel work unit.
pub(crate) const BATCH: u64 = 256;

/// Normal quantile for a two-sided 95% interval.
const Z95: f64 = 1.96;

/// A Monte Carlo mean with its 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width_95: f64,
    pub trials: u64,
}

impl Estimate {
    /// Binomial proportion `successes / trials`.
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let n = trials as f64;
        let mean = successes as f64 / n;
        Estimate { mean, half_width_95: Z95 * libm::sqrt(mean * (1.0 - mean) / n), trials }
    }

    /// Sample mean from the first two raw moments.
    pub fn from_moments(sum: f64, sum_sq: f64, trials: u64) -> Self {
        let n = trials as f64;
        let mean = sum / n;
        let var = if trials > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Estimate { mean, half_width_95: Z95 * libm::sqrt(var / n), trials }
    }

    pub fn standard_error(&self) -> f64 {
        self.half_width_95 / Z95
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub connected: bool,
    pub secret: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub scenario: Scenario,
    pub scheme: Scheme,
    pub trials: u64,
    /// Radius of the sampling disk around the typical receiver, in metres.
    pub window_radius: f64,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { scenario: Scenario::Simplified, scheme: Scheme::Scj, trials: 10_000, window_radius: 500.0, seed: 42 }
    }
}

impl SimulationConfig {
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        if !(self.window_radius > params.r0) || !self.window_radius.is_finite() {
            return Err(Error::param("window_radius", "must be finite and exceed r0"));
        }
        Ok(())
    }
}

/// Simulates one parameter set under one configuration.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: SystemParams,
    config: SimulationConfig,
    model: LinkModel,
}

impl Simulator {
    pub fn new(params: SystemParams, config: SimulationConfig) -> Result<Self> {
        params.validate()?;
        config.validate(&params)?;
        Ok(Simulator { model: LinkModel::new(&params), params, config })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn link_model(&self) -> &LinkModel {
        &self.model
    }

    /// The network of trial `trial` with jammers selected. Eavesdroppers live
    /// on their own stream, so omitting them leaves everything else unchanged.
    pub fn realization(&self, trial: u64, with_eavesdroppers: bool) -> Result<NetworkRealization> {
        let c = &self.config;
        let mut net = NetworkRealization::sample(&self.params, c.scenario, c.window_radius, c.seed, trial, with_eavesdroppers);
        net.select(c.scheme, &self.params)?;
        Ok(net)
    }

    pub fn trial(&self, trial: u64) -> Result<TrialOutcome> {
        let net = self.realization(trial, true)?;
        Ok(TrialOutcome { connected: self.connected(&net)?, secret: self.secret(&net)? })
    }

    /// Whether the typical receiver decodes at rate R_t.
    pub fn connected(&self, net: &NetworkRealization) -> Result<bool> {
        let sinr = net.sinr_at(NodeId::Receiver(0), NodeId::Transmitter(0), &self.params, &self.model)?;
        Ok(sinr >= self.params.connection_threshold())
    }

    /// Whether no eavesdropper decodes the typical transmitter at rate R_e.
    pub fn secret(&self, net: &NetworkRealization) -> Result<bool> {
        if net.eavesdroppers.is_empty() {
            return Ok(true);
        }
        let source = NodeId::Transmitter(0);
        let ids = net.active_interferers(source);
        let points: Vec<Point> = ids.iter().map(|&id| net.position(id)).collect();
        let grid = GridIndex::new(&points, 0.5 * self.params.d);
        let noise = self.params.noise_to_power();
        let theta = self.params.secrecy_threshold();
        for e in 0..net.eavesdroppers.len() as u32 {
            let eve = NodeId::Eavesdropper(e);
            let signal = net.link(source, eve, &self.params, &self.model)?.power(&self.params);
            // The eavesdropper fails once interference plus noise reaches this.
            let floor = signal / theta;
            if noise >= floor {
                continue;
            }
            let z = net.position(eve);
            let mut total = noise;
            let mut failure = None;
            grid.visit_rings(
                &z,
                |i, p| {
                    let d = z.distance(p);
                    if d == 0.0 {
                        failure = Some(Error::ZeroDistance);
                        return ControlFlow::Break(());
                    }
                    total += net.link_at(ids[i], eve, d, &self.params, &self.model).power(&self.params);
                    if total >= floor {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                },
                |_| false,
            );
            if let Some(err) = failure {
                return Err(err);
            }
            if total < floor {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn count<F>(&self, with_eavesdroppers: bool, event: F) -> Result<Estimate>
    where
        F: Fn(&Self, &NetworkRealization) -> Result<bool> + Sync + Send,
    {
        let batches = map_batches(self.config.trials, BATCH, |start, end| -> Result<u64> {
            let mut hits = 0;
            for t in start..end {
                let net = self.realization(t, with_eavesdroppers)?;
                hits += event(self, &net)? as u64;
            }
            Ok(hits)
        });
        let mut hits = 0;
        for b in batches {
            hits += b?;
        }
        Ok(Estimate::from_counts(hits, self.config.trials))
    }

    pub fn estimate_pc(&self) -> Result<Estimate> {
        self.count(false, Self::connected)
    }

    pub fn estimate_ps(&self) -> Result<Estimate> {
        if self.params.lambda_e == 0.0 {
            return Ok(Estimate::from_counts(self.config.trials, self.config.trials));
        }
        self.count(true, Self::secret)
    }

    /// STC from the two estimates.
    pub fn estimate_stc(&self) -> Result<f64> {
        let pc = self.estimate_pc()?;
        let ps = self.estimate_ps()?;
        Ok(crate::analytic::stc(pc.mean, ps.mean, &self.params))
    }
}

pub fn estimate_pc(params: &SystemParams, config: SimulationConfig) -> Result<Estimate> {
    Simulator::new(*params, config)?.estimate_pc()
}

pub fn estimate_ps(params: &SystemParams, config: SimulationConfig) -> Result<Estimate> {
    Simulator::new(*params, config)?.estimate_ps()
}

pub fn estimate_stc(params: &SystemParams, config: SimulationConfig) -> Result<f64> {
    Simulator::new(*params, config)?.estimate_stc()
}
