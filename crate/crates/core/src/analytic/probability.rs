//! Connection and secrecy probabilities, STC and NSEE.

use core::f64::consts::PI;

use alloc::vec::Vec;

use super::laplace::HoleExponent;
use super::Analytic;
use crate::error::Result;
use crate::params::{binomial, LinkState, Scenario, Scheme, SystemParams};
use crate::quadrature::{integrate, integrate_to_infinity};

/// How out-of-ball jammers are thinned around the eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HoleModel {
    /// No out-of-ball jammers.
    None,
    /// Parent PPP of the given density with the typical receiver's ball removed.
    Single { density: f64 },
    /// Parent PPP of the given density with the ball of the receiver nearest
    /// to the eavesdropper removed.
    Nearest { density: f64 },
}

/// Below this magnitude a secrecy term is dropped before its hole factor,
/// which is at most 1, is evaluated.
pub(crate) const NEGLIGIBLE: f64 = 1e-16;

/// Sum of mixed-sign terms, largest magnitude first, with Neumaier
/// compensation.
pub(crate) fn alternating_sum(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &t in terms.iter() {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

pub(crate) fn sign(k: u32) -> f64 {
    if k % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

impl Analytic {
    /// Σ_k C(N_L, k)(−1)^{k+1} e^{−kμσ²/P} Π(kμ) with the product of
    /// transforms supplied by `factors`.
    fn connection_sum<F: FnMut(f64) -> Result<f64>>(&self, mut factors: F) -> Result<f64> {
        let p = &self.params;
        let mu = self.mu();
        let nz = p.noise_to_power();
        let mut terms = Vec::with_capacity(p.n_los as usize);
        for k in 1..=p.n_los {
            let s = k as f64 * mu;
            let noise = libm::exp(-s * nz);
            let w = sign(k) * binomial(p.n_los, k) * noise;
            terms.push(if w == 0.0 { 0.0 } else { w * factors(s)? });
        }
        Ok(alternating_sum(&mut terms).clamp(0.0, 1.0))
    }

    pub fn connection_probability(&self, scheme: Scheme, scenario: Scenario) -> Result<f64> {
        let p = self.params;
        let tx = match scenario {
            Scenario::Simplified => 0.0,
            Scenario::General => p.lambda_t,
        };
        let in_ball = |s: f64| -> Result<f64> {
            Ok(match scenario {
                Scenario::Simplified => self.lt_jam_rx_simplified(s)?.value,
                Scenario::General => self.lt_tx_rx(tx, s)?.value * self.lt_jam_rx_general(s)?.value,
            })
        };
        match scheme {
            Scheme::Scj => self.connection_sum(|s| Ok(in_ball(s)? * self.lt_php_rx_simplified(s)?.value)),
            Scheme::ScjQuiet => self.connection_sum(in_ball),
            Scheme::Pj => self.connection_sum(|s| Ok(self.lt_tx_rx(tx + p.varrho * p.lambda_p, s)?.value)),
            Scheme::None => self.connection_sum(|s| Ok(self.lt_tx_rx(tx, s)?.value)),
        }
    }

    /// Upper bound on the connection probability of the typical pair alone
    /// under SCJ.
    pub fn connection_prob_simplified(&self) -> Result<f64> {
        self.connection_probability(Scheme::Scj, Scenario::Simplified)
    }

    /// Approximate connection probability in the general scenario under SCJ.
    pub fn connection_prob_general(&self) -> Result<f64> {
        self.connection_probability(Scheme::Scj, Scenario::General)
    }

    /// Connection probability in the general scenario under PJ.
    pub fn connection_prob_pj(&self) -> Result<f64> {
        self.connection_probability(Scheme::Pj, Scenario::General)
    }

    /// Interferer densities seen by an eavesdropper: the homogeneous part and
    /// the hole-process part.
    pub fn secrecy_densities(&self, scheme: Scheme, scenario: Scenario) -> (f64, HoleModel) {
        secrecy_densities(&self.params, scheme, scenario)
    }

    pub fn secrecy_probability(&self, scheme: Scheme, scenario: Scenario) -> Result<f64> {
        let (ppp, holes) = self.secrecy_densities(scheme, scenario);
        self.secrecy_prob_with(ppp, holes)
    }

    /// Lower bound on the secrecy probability of the typical pair alone under SCJ.
    pub fn secrecy_prob_simplified(&self) -> Result<f64> {
        self.secrecy_probability(Scheme::Scj, Scenario::Simplified)
    }

    /// Approximate secrecy probability in the general scenario under SCJ.
    pub fn secrecy_prob_general(&self) -> Result<f64> {
        self.secrecy_probability(Scheme::Scj, Scenario::General)
    }

    /// Secrecy probability in the general scenario under PJ.
    pub fn secrecy_prob_pj(&self) -> Result<f64> {
        self.secrecy_probability(Scheme::Pj, Scenario::General)
    }

    /// Secrecy probability with homogeneous interferers of density `ppp` and
    /// hole-process jammers per `holes`.
    pub fn secrecy_prob_with(&self, ppp: f64, holes: HoleModel) -> Result<f64> {
        let p = &self.params;
        if p.lambda_e == 0.0 {
            return Ok(1.0);
        }
        let mut terms = Vec::new();
        let inside = integrate(
            |r| {
                terms.clear();
                for (state, weight) in [(LinkState::Los, p.p_los), (LinkState::Nlos, p.p_nlos())] {
                    if weight > 0.0 {
                        self.secrecy_terms(r, state, weight, ppp, holes, &mut terms)?;
                    }
                }
                Ok(alternating_sum(&mut terms) * r)
            },
            0.0,
            p.d,
            &self.quad,
        )?;
        let outside = integrate_to_infinity(
            |r| {
                terms.clear();
                self.secrecy_terms(r, LinkState::Nlos, 1.0, ppp, holes, &mut terms)?;
                Ok(alternating_sum(&mut terms) * r)
            },
            p.d,
            &self.quad,
        )?;
        let exponent = 2.0 * PI * p.lambda_e * (inside.value + outside.value);
        Ok(libm::exp(-exponent).clamp(0.0, 1.0))
    }

    /// Pushes p_b q_ĝ C(N_b, k)(−1)^{k+1} e^{−sσ²/P} L_PPP(s) L_holes(s, r)
    /// for every signal gain ĝ and k, at s = k ν_b(ĝ) r^{α_b}.
    fn secrecy_terms(
        &self,
        r: f64,
        state: LinkState,
        weight: f64,
        ppp: f64,
        holes: HoleModel,
        terms: &mut Vec<f64>,
    ) -> Result<()> {
        let p = &self.params;
        let n = p.nakagami(state);
        let alpha = p.path_loss_exponent(state);
        let ra = crate::channel::power(r, alpha);
        let nz = p.noise_to_power();
        for (g, q) in self.eve.iter() {
            if q == 0.0 {
                continue;
            }
            let base = self.nu(state, g) * ra;
            for k in 1..=n {
                let s = k as f64 * base;
                let w = weight * q * sign(k) * binomial(n, k) * libm::exp(-s * nz);
                if w.abs() < NEGLIGIBLE {
                    continue;
                }
                let h = HoleExponent::new(self, s)?;
                let homogeneous = w * libm::exp(-ppp * h.homogeneous());
                if homogeneous.abs() < NEGLIGIBLE {
                    continue;
                }
                let hole = match holes {
                    HoleModel::None => 1.0,
                    HoleModel::Single { density } if density > 0.0 => self.hole_mean_single(&h, density, r)?.value,
                    HoleModel::Nearest { density } if density > 0.0 => self.hole_mean_nearest(&h, density, r)?.value,
                    _ => 1.0,
                };
                terms.push(homogeneous * hole);
            }
        }
        Ok(())
    }
}

pub(crate) fn secrecy_densities(p: &SystemParams, scheme: Scheme, scenario: Scenario) -> (f64, HoleModel) {
    let tx = match scenario {
        Scenario::Simplified => 0.0,
        Scenario::General => p.lambda_t,
    };
    match scheme {
        Scheme::Scj => match scenario {
            Scenario::Simplified => (p.lambda_j(), HoleModel::Single { density: p.lambda_j_bar() }),
            Scenario::General => (tx + p.lambda_j(), HoleModel::Nearest { density: p.lambda_j_blended() }),
        },
        Scheme::ScjQuiet => (tx + p.lambda_j(), HoleModel::None),
        Scheme::Pj => (tx + p.varrho * p.lambda_p, HoleModel::None),
        Scheme::None => (tx, HoleModel::None),
    }
}

/// Secrecy transmission capacity p_c p_s (R_t − R_e) λ_T in bps/Hz/m².
pub fn stc(p_c: f64, p_s: f64, params: &SystemParams) -> f64 {
    p_c * p_s * (params.rate_t - params.rate_e) * params.lambda_t
}

/// Network-wide secrecy energy efficiency: STC per watt radiated per square
/// metre under `scheme`.
pub fn nsee(stc: f64, params: &SystemParams, scheme: Scheme) -> f64 {
    let radiated = params.radiating_density(scheme) * params.power;
    if stc == 0.0 || radiated == 0.0 {
        0.0
    } else {
        stc / radiated
    }
}
