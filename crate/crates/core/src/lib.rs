//! Stochastic-geometry models of sight-based cooperative jamming (SCJ) in
//! mmWave ad hoc networks.
//!
//! Two engines share one parameter set:
//!
//! * [`analytic`] evaluates the Laplace-transform bounds on connection and
//!   secrecy probability by adaptive quadrature;
//! * [`montecarlo`] simulates the spatial network directly and doubles as a
//!   brute-force oracle for every transform.
//!
//! [`optimizer`] maximises the secrecy transmission capacity over the jamming
//! parameters on top of the analytic engine, by default through
//! [`analytic::TabulatedModel`], which tabulates the transforms once per
//! parameter set.
//!
//! The crate is `no_std` with `alloc`; the default `std` feature adds
//! rayon-parallel trial execution.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is deliberate: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod channel;
pub mod error;
pub mod gain;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod params;
pub mod point_process;
pub mod quadrature;
mod rng;
mod par;

pub use error::{Error, Result};
pub use gain::GainDistribution;
pub use params::{LinkState, Scenario, Scheme, SystemParams};
