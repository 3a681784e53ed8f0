//! Empirical Laplace transforms of interference, the brute-force check on
//! every analytic transform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::{Estimate, BATCH};
use crate::analytic::Victim;
use crate::channel::{path_loss, sample_link_state};
use crate::error::{Error, Result};
use crate::gain::GainDistribution;
use crate::geometry::Point;
use crate::par::map_batches;
use crate::params::{LinkState, Scenario, Scheme, SystemParams};
use crate::point_process::{nearest_linear, sample_ppp, GridIndex, LinkModel, NetworkRealization, NodeId};
use crate::rng::{link_rng, process_rng, trial_key, Process};

/// An interferer process and the node that hears it. The victim sits at the
/// centre of the sampling disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterfererConfig {
    /// PPP of `density` outside radius `inner_radius`. `state` forces the
    /// blockage state of every link; `None` samples it.
    Homogeneous { density: f64, inner_radius: f64, state: Option<LinkState>, victim: Victim },
    /// An eavesdropper at `eve_distance` from the typical transmitter, whose
    /// receiver sits r0 further at a uniform angle; interferers form a PPP of
    /// `density` with that receiver's LoS ball removed.
    SingleHole { density: f64, eve_distance: f64 },
    /// As `SingleHole`, with further holes around a receiver PPP of
    /// `receiver_density`.
    PoissonHole { density: f64, receiver_density: f64, eve_distance: f64 },
    /// As `PoissonHole`, but only the ball of the receiver nearest the
    /// eavesdropper is removed.
    NearestHole { density: f64, receiver_density: f64, eve_distance: f64 },
    /// The homogeneous part of the SCJ jammers, heard at the typical
    /// receiver: every active jammer inside the LoS ball of its nearest
    /// receiver, plus an independent ρp_N-thinning of those outside all balls.
    /// Its density is ρp_Nλ_P everywhere.
    SightJammers { scenario: Scenario },
}

impl InterfererConfig {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            InterfererConfig::Homogeneous { density, inner_radius, .. } => density >= 0.0 && inner_radius >= 0.0,
            InterfererConfig::SingleHole { density, eve_distance } => density >= 0.0 && eve_distance > 0.0,
            InterfererConfig::PoissonHole { density, receiver_density, eve_distance }
            | InterfererConfig::NearestHole { density, receiver_density, eve_distance } => {
                density >= 0.0 && receiver_density >= 0.0 && eve_distance > 0.0
            }
            InterfererConfig::SightJammers { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param("interferer_config", "densities and radii must be non-negative"))
        }
    }
}

/// Sample mean of e^{−sI} over `trials` realizations.
pub fn empirical_laplace(
    params: &SystemParams,
    config: InterfererConfig,
    s: f64,
    trials: u64,
    window_radius: f64,
    seed: u64,
) -> Result<Estimate> {
    Ok(empirical_laplace_many(params, config, &[s], trials, window_radius, seed)?[0])
}

/// [`empirical_laplace`] at several `s` from the same interference samples.
pub fn empirical_laplace_many(
    params: &SystemParams,
    config: InterfererConfig,
    s: &[f64],
    trials: u64,
    window_radius: f64,
    seed: u64,
) -> Result<Vec<Estimate>> {
    params.validate()?;
    config.validate()?;
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    if !(window_radius > 0.0) || !window_radius.is_finite() {
        return Err(Error::param("window_radius", "must be positive and finite"));
    }
    if s.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::param("s", "must be non-negative and finite"));
    }
    let sampler = Sampler { params, model: LinkModel::new(params), config, window_radius, seed };
    let batches = map_batches(trials, BATCH, |start, end| -> Result<Vec<(f64, f64)>> {
        let mut acc = vec![(0.0, 0.0); s.len()];
        for t in start..end {
            let i = sampler.interference(t)?;
            for (a, &sk) in acc.iter_mut().zip(s) {
                let v = libm::exp(-sk * i);
                a.0 += v;
                a.1 += v * v;
            }
        }
        Ok(acc)
    });
    let mut total = vec![(0.0, 0.0); s.len()];
    for b in batches {
        for (t, v) in total.iter_mut().zip(b?) {
            t.0 += v.0;
            t.1 += v.1;
        }
    }
    Ok(total.into_iter().map(|(m1, m2)| Estimate::from_moments(m1, m2, trials)).collect())
}

struct Sampler<'a> {
    params: &'a SystemParams,
    model: LinkModel,
    config: InterfererConfig,
    window_radius: f64,
    seed: u64,
}

impl Sampler<'_> {
    fn gains(&self, victim: Victim) -> &GainDistribution {
        match victim {
            Victim::Receiver => &self.model.rx_gains,
            Victim::Eavesdropper => &self.model.eve_gains,
        }
    }

    /// Received power from interferer `i` at distance `r` from the victim.
    fn power(&self, key: u64, i: usize, r: f64, state: Option<LinkState>, victim: Victim) -> f64 {
        let mut rng = link_rng(key, i as u64, u64::MAX);
        let drawn = sample_link_state(r, self.params.p_los, self.params.d, &mut rng);
        let state = state.unwrap_or(drawn);
        let gain = self.gains(victim).sample(&mut rng);
        gain * self.model.fading.sample(state, &mut rng) * path_loss(state, r, self.params)
    }

    fn interference(&self, trial: u64) -> Result<f64> {
        let p = self.params;
        let key = trial_key(self.seed, trial);
        let mut jam_rng = process_rng(self.seed, trial, Process::Jammers);
        match self.config {
            InterfererConfig::Homogeneous { density, inner_radius, state, victim } => {
                let points = sample_ppp(density, self.window_radius, &mut jam_rng);
                let mut total = 0.0;
                for (i, x) in points.iter().enumerate() {
                    let r = x.norm();
                    if r < inner_radius {
                        continue;
                    }
                    if r == 0.0 {
                        return Err(Error::ZeroDistance);
                    }
                    total += self.power(key, i, r, state, victim);
                }
                Ok(total)
            }
            InterfererConfig::SingleHole { density, eve_distance } => {
                self.hole_interference(trial, density, 0.0, eve_distance, false, &mut jam_rng)
            }
            InterfererConfig::PoissonHole { density, receiver_density, eve_distance } => {
                self.hole_interference(trial, density, receiver_density, eve_distance, false, &mut jam_rng)
            }
            InterfererConfig::NearestHole { density, receiver_density, eve_distance } => {
                self.hole_interference(trial, density, receiver_density, eve_distance, true, &mut jam_rng)
            }
            InterfererConfig::SightJammers { scenario } => {
                let mut net = NetworkRealization::sample(p, scenario, self.window_radius, self.seed, trial, false);
                net.select(Scheme::Scj, p)?;
                let victim = NodeId::Receiver(0);
                let keep = p.rho * p.p_nlos();
                let mut total = 0.0;
                for i in 0..net.potential_jammers.len() {
                    let x = net.potential_jammers[i];
                    if !net.jammer_flags[i] {
                        continue;
                    }
                    // Selection ignores the draw of jammers outside every ball,
                    // so it is free to thin them here.
                    if net.nearest_receiver(&x)?.1 > p.d && net.selection_draws[i] >= keep {
                        continue;
                    }
                    total += net.link(NodeId::Jammer(i as u32), victim, p, &self.model)?.power(p);
                }
                Ok(total)
            }
        }
    }

    fn hole_interference<R: Rng + ?Sized>(
        &self,
        trial: u64,
        density: f64,
        receiver_density: f64,
        eve_distance: f64,
        nearest_only: bool,
        jam_rng: &mut R,
    ) -> Result<f64> {
        let p = self.params;
        let key = trial_key(self.seed, trial);
        let mut pair_rng = process_rng(self.seed, trial, Process::Pair);
        let x0 = Point::polar(eve_distance, 2.0 * PI * pair_rng.random::<f64>());
        let a = 2.0 * PI * pair_rng.random::<f64>();
        let mut holes = vec![Point::new(x0.x + p.r0 * libm::cos(a), x0.y + p.r0 * libm::sin(a))];
        let mut rx_rng = process_rng(self.seed, trial, Process::Transmitters);
        holes.extend(sample_ppp(receiver_density, self.window_radius, &mut rx_rng));
        if nearest_only {
            let eve = Point::new(0.0, 0.0);
            let (i, _) = nearest_linear(&eve, &holes).ok_or(Error::NoReceivers)?;
            holes = vec![holes[i]];
        }
        let grid = GridIndex::new(&holes, p.d);
        let points = sample_ppp(density, self.window_radius, jam_rng);
        let mut total = 0.0;
        for (i, x) in points.iter().enumerate() {
            let (_, to_hole) = grid.nearest(x).ok_or(Error::NoReceivers)?;
            if to_hole <= p.d {
                continue;
            }
            let r = x.norm();
            if r == 0.0 {
                return Err(Error::ZeroDistance);
            }
            total += self.power(key, i, r, None, Victim::Eavesdropper);
        }
        Ok(total)
    }
}
