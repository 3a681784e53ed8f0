//! Closed-form bounds and approximations evaluated by adaptive quadrature.
//!
//! Every Laplace transform here has the form `E[exp(−s I)]` for the aggregate
//! interference `I` of one interferer process at one victim. Connection and
//! secrecy probabilities are binomial sums of products of these transforms.

mod kernel;
mod laplace;
mod probability;
pub mod region;
mod table;

pub use kernel::kernel;
pub use laplace::LaplaceValue;
pub use probability::{nsee, stc, HoleModel};
pub use table::{TableResolution, TabulatedModel};

use crate::error::{Error, Result};
use crate::gain::GainDistribution;
use crate::params::{alzer_tau, LinkState, SystemParams};
use crate::quadrature::QuadratureConfig;
use kernel::PathClass;

/// Antenna role of the node at which interference is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Victim {
    Receiver,
    Eavesdropper,
}

/// The analytic engine for one parameter point.
#[derive(Debug, Clone)]
pub struct Analytic {
    params: SystemParams,
    quad: QuadratureConfig,
    los: PathClass,
    nlos: PathClass,
    rx: GainDistribution,
    eve: GainDistribution,
}

impl Analytic {
    pub fn new(params: SystemParams, quad: QuadratureConfig) -> Result<Self> {
        params.validate()?;
        quad.validate(params.d)?;
        Ok(Analytic {
            los: PathClass::new(&params, LinkState::Los),
            nlos: PathClass::new(&params, LinkState::Nlos),
            rx: GainDistribution::receiver(&params),
            eve: GainDistribution::eavesdropper(&params),
            params,
            quad,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn gains(&self, victim: Victim) -> &GainDistribution {
        match victim {
            Victim::Receiver => &self.rx,
            Victim::Eavesdropper => &self.eve,
        }
    }

    /// μ = τ_L r0^{α_L} (2^{R_t} − 1)/(G_T G_R): the Laplace argument of the
    /// first connection term.
    pub fn mu(&self) -> f64 {
        let p = &self.params;
        alzer_tau(p.n_los) * libm::pow(p.r0, p.alpha_los) * p.connection_threshold() / (p.tx.main * p.rx.main)
    }

    /// ν_b = τ_b (2^{R_e} − 1)/ĝ for an eavesdropper link of class `state`
    /// and signal gain `g`.
    pub fn nu(&self, state: LinkState, g: f64) -> f64 {
        alzer_tau(self.params.nakagami(state)) * self.params.secrecy_threshold() / g
    }

    fn class(&self, state: LinkState) -> &PathClass {
        match state {
            LinkState::Los => &self.los,
            LinkState::Nlos => &self.nlos,
        }
    }
}

fn check_argument(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("s", "Laplace argument must be finite and >= 0"))
    }
}
