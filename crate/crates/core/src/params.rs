//! System parameters shared by the analytic and Monte Carlo engines.

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Blockage state of a link under the LoS ball model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

/// Jammer selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Sight-based cooperative jamming: potential jammers that are NLoS to
    /// (or outside the LoS ball of) their nearest receiver transmit noise.
    Scj,
    /// Partial jamming: a fixed fraction of potential jammers transmit.
    Pj,
    /// SCJ with the jammers outside every LoS ball kept quiet.
    ScjQuiet,
    /// No jamming at all.
    None,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Scj, Scheme::Pj, Scheme::ScjQuiet, Scheme::None];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Scj => "scj",
            Scheme::Pj => "pj",
            Scheme::ScjQuiet => "scj-q",
            Scheme::None => "none",
        }
    }
}

/// Which nodes populate the network besides the typical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// The typical pair is the only legitimate link.
    Simplified,
    /// Transmitter-receiver pairs form a PPP of density λ_T.
    General,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Simplified => "simplified",
            Scenario::General => "general",
        }
    }
}

/// Flat-top sectored antenna pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Antenna {
    /// Main-lobe beam width in radians.
    pub beamwidth: f64,
    /// Main-lobe gain (linear).
    pub main: f64,
    /// Back-lobe gain (linear).
    pub back: f64,
}

impl Antenna {
    pub const fn new(beamwidth: f64, main: f64, back: f64) -> Self {
        Antenna { beamwidth, main, back }
    }

    /// Probability that a uniformly random direction falls in the main lobe.
    pub fn main_lobe_probability(&self) -> f64 {
        self.beamwidth / (2.0 * PI)
    }
}

/// Every scalar of the network model.
///
/// Distances are in metres, densities in nodes per square metre, powers in
/// watts and rates in bps/Hz. The receiver density always equals the
/// transmitter density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub lambda_t: f64,
    pub lambda_p: f64,
    pub lambda_e: f64,
    /// In-ball activation probability of an NLoS potential jammer (SCJ).
    pub rho: f64,
    /// Activation fraction of potential jammers (PJ).
    pub varrho: f64,
    /// Transmitter-receiver pair distance.
    pub r0: f64,
    /// LoS ball radius.
    pub d: f64,
    /// LoS probability inside the ball.
    pub p_los: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    /// Nakagami shape of LoS links.
    pub n_los: u32,
    /// Nakagami shape of NLoS links.
    pub n_nlos: u32,
    pub power: f64,
    /// Noise power in watts.
    pub sigma2: f64,
    pub tx: Antenna,
    pub rx: Antenna,
    pub eve: Antenna,
    /// Codeword rate.
    pub rate_t: f64,
    /// Redundancy rate.
    pub rate_e: f64,
    /// Blend between the single-hole and independent-thinning approximations
    /// of the hole process seen by eavesdroppers.
    pub beta: f64,
}

/// Thermal noise over 1 GHz at -174 dBm/Hz, in watts.
pub const REFERENCE_NOISE_POWER: f64 = 3.981_071_705_534_969e-12;

impl Default for SystemParams {
    /// The reference configuration: 100 m LoS pair links, 200 m LoS balls,
    /// p_L = 0.2, exponents 2/4, Nakagami 3/2, 1 W, 30° beams with 10/0.1
    /// lobe gains, rates 8/4 and β = 0.8, at λ_T = 7e-5, λ_P = 1e-3,
    /// λ_E = 1e-4 and ρ = ϱ = 0.5.
    fn default() -> Self {
        let beam = Antenna::new(PI / 6.0, 10.0, 0.1);
        SystemParams {
            lambda_t: 7e-5,
            lambda_p: 1e-3,
            lambda_e: 1e-4,
            rho: 0.5,
            varrho: 0.5,
            r0: 100.0,
            d: 200.0,
            p_los: 0.2,
            alpha_los: 2.0,
            alpha_nlos: 4.0,
            n_los: 3,
            n_nlos: 2,
            power: 1.0,
            sigma2: REFERENCE_NOISE_POWER,
            tx: beam,
            rx: beam,
            eve: beam,
            rate_t: 8.0,
            rate_e: 4.0,
            beta: 0.8,
        }
    }
}

fn check(ok: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(name, reason))
    }
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn density(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        check(density(self.lambda_t), "lambda_T", "must be finite and >= 0")?;
        check(density(self.lambda_p), "lambda_P", "must be finite and >= 0")?;
        check(density(self.lambda_e), "lambda_E", "must be finite and >= 0")?;
        check(unit(self.rho), "rho", "must lie in [0, 1]")?;
        check(unit(self.varrho), "varrho", "must lie in [0, 1]")?;
        check(unit(self.p_los), "p_L", "must lie in [0, 1]")?;
        check(unit(self.beta), "beta", "must lie in [0, 1]")?;
        check(self.d.is_finite() && self.d > 0.0, "D", "must be finite and > 0")?;
        check(self.r0 > 0.0 && self.r0 <= self.d, "r0", "must satisfy 0 < r0 <= D")?;
        check(self.alpha_los.is_finite() && self.alpha_los > 0.0, "alpha_L", "must be > 0")?;
        // Below 2 the aggregate NLoS interference of an infinite network diverges.
        check(self.alpha_nlos.is_finite() && self.alpha_nlos > 2.0, "alpha_N", "must be > 2")?;
        check(self.n_los >= 1, "N_L", "must be >= 1")?;
        check(self.n_nlos >= 1, "N_N", "must be >= 1")?;
        check(self.power.is_finite() && self.power > 0.0, "P", "must be finite and > 0")?;
        check(self.sigma2.is_finite() && self.sigma2 >= 0.0, "sigma2", "must be finite and >= 0")?;
        for (a, beam, main, back) in [
            (&self.tx, "theta_T", "G_T", "g_T"),
            (&self.rx, "theta_R", "G_R", "g_R"),
            (&self.eve, "theta_E", "G_E", "g_E"),
        ] {
            check(a.beamwidth > 0.0 && a.beamwidth <= 2.0 * PI, beam, "must lie in (0, 2π]")?;
            check(a.back.is_finite() && a.back > 0.0, back, "must be finite and > 0")?;
            check(a.main.is_finite() && a.main > a.back, main, "must exceed the back-lobe gain")?;
        }
        check(self.rate_e.is_finite() && self.rate_e >= 0.0, "R_e", "must be finite and >= 0")?;
        check(self.rate_t.is_finite() && self.rate_t >= self.rate_e, "R_t", "must be >= R_e")?;
        Ok(())
    }

    pub fn p_nlos(&self) -> f64 {
        1.0 - self.p_los
    }

    pub fn lambda_r(&self) -> f64 {
        self.lambda_t
    }

    /// Density of in-ball SCJ jammers, ρ p_N λ_P.
    pub fn lambda_j(&self) -> f64 {
        self.rho * self.p_nlos() * self.lambda_p
    }

    /// Density of the parent process of out-of-ball SCJ jammers, (1 − ρ p_N) λ_P.
    pub fn lambda_j_bar(&self) -> f64 {
        (1.0 - self.rho * self.p_nlos()) * self.lambda_p
    }

    /// Probability that a point is outside every receiver LoS ball.
    pub fn outside_balls_probability(&self) -> f64 {
        libm::exp(-self.lambda_r() * PI * self.d * self.d)
    }

    /// Density used for the hole process seen by eavesdroppers,
    /// (β e^{−λ_R π D²} + 1 − β) λ̄_J.
    pub fn lambda_j_blended(&self) -> f64 {
        (self.beta * self.outside_balls_probability() + 1.0 - self.beta) * self.lambda_j_bar()
    }

    pub fn noise_to_power(&self) -> f64 {
        self.sigma2 / self.power
    }

    pub fn path_loss_exponent(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.alpha_los,
            LinkState::Nlos => self.alpha_nlos,
        }
    }

    pub fn nakagami(&self, state: LinkState) -> u32 {
        match state {
            LinkState::Los => self.n_los,
            LinkState::Nlos => self.n_nlos,
        }
    }

    pub fn connection_threshold(&self) -> f64 {
        libm::exp2(self.rate_t) - 1.0
    }

    pub fn secrecy_threshold(&self) -> f64 {
        libm::exp2(self.rate_e) - 1.0
    }

    /// Average density of radiating nodes under `scheme`: transmitters plus
    /// active jammers.
    pub fn radiating_density(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Scj => {
                self.lambda_t + self.lambda_j() + self.outside_balls_probability() * self.lambda_j_bar()
            }
            Scheme::ScjQuiet => self.lambda_t + self.lambda_j(),
            Scheme::Pj => self.lambda_t + self.varrho * self.lambda_p,
            Scheme::None => self.lambda_t,
        }
    }

    /// The jamming knob of `scheme`: ρ for the SCJ variants, ϱ for PJ.
    pub fn jamming(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Pj => self.varrho,
            Scheme::Scj | Scheme::ScjQuiet => self.rho,
            Scheme::None => 0.0,
        }
    }

    pub fn with_jamming(mut self, scheme: Scheme, value: f64) -> Self {
        match scheme {
            Scheme::Pj => self.varrho = value,
            Scheme::Scj | Scheme::ScjQuiet => self.rho = value,
            Scheme::None => {}
        }
        self
    }
}

/// τ_N = N (N!)^{−1/N}, the tightest Alzer constant for a Γ(N, N) variable.
pub fn alzer_tau(n: u32) -> f64 {
    let n = n as f64;
    n * libm::exp(-libm::lgamma(n + 1.0) / n)
}

/// Binomial coefficient as a float; exact for the small shapes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid() {
        SystemParams::default().validate().unwrap();
    }

    #[test]
    fn thresholds() {
        let p = SystemParams::default();
        assert_eq!(p.connection_threshold(), 255.0);
        assert_eq!(p.secrecy_threshold(), 15.0);
        let p = SystemParams { rate_t: 0.0, rate_e: 0.0, ..p };
        assert_eq!(p.connection_threshold(), 0.0);
    }

    #[test]
    fn noise_power_matches_density_times_bandwidth() {
        let w = 1e-3 * libm::pow(10.0, -17.4) * 1e9;
        assert!((w - REFERENCE_NOISE_POWER).abs() < 1e-24);
    }

    #[test]
    fn rejects_bad_values() {
        let p = SystemParams::default();
        for bad in [
            SystemParams { lambda_p: -1.0, ..p },
            SystemParams { rho: 1.5, ..p },
            SystemParams { r0: 300.0, ..p },
            SystemParams { n_los: 0, ..p },
            SystemParams { rate_e: 9.0, ..p },
            SystemParams { alpha_nlos: 2.0, ..p },
            SystemParams { tx: Antenna::new(PI, 0.1, 0.1), ..p },
            SystemParams { eve: Antenna::new(7.0, 10.0, 0.1), ..p },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn blended_density_reference() {
        let p = SystemParams::default();
        let ratio = p.lambda_j_blended() / p.lambda_j_bar();
        let expected = 0.8 * libm::exp(-7e-5 * PI * 4e4) + 0.2;
        assert!((ratio - expected).abs() < 1e-15);
        assert!((ratio - 0.200_12).abs() < 1e-5);
    }

    #[test]
    fn alzer_constants() {
        assert!((alzer_tau(3) - 3.0 * libm::pow(6.0, -1.0 / 3.0)).abs() < 1e-13);
        assert!((alzer_tau(1) - 1.0).abs() < 1e-14);
        assert_eq!(binomial(3, 2), 3.0);
        assert_eq!(binomial(5, 0), 1.0);
    }
}
