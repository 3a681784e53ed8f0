use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    /// Adaptive quadrature hit its depth or interval budget before meeting the
    /// requested tolerance. `partial` is the best estimate available.
    #[error("quadrature did not converge on [{lower}, {upper}]: estimate {partial} with error {error}")]
    Quadrature { lower: f64, upper: f64, partial: f64, error: f64 },

    #[error("coincident points: zero link distance")]
    ZeroDistance,

    #[error("receiver set is empty")]
    NoReceivers,

    #[error("objective evaluation failed at {at}: {source}")]
    Objective {
        at: f64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
