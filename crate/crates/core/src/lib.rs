//! Correlation engine for sub-threshold cavity-enhanced spontaneous parametric
//! down-conversion.
//!
//! A ring cavity with an output coupler (`r1`), a lumped loss mirror (`r2`) and a
//! single-pass squeezer of amplitude `r` maps vacuum inputs onto a squeezed,
//! multimode output. This crate evaluates that map in the frequency domain
//! ([`bogoliubov`]), derives squeezing spectra ([`spectra`]), builds the two-time
//! intensity correlation `G2(T)` as a comb of peaks at multiples of the round-trip
//! time plus an accidental background ([`comb`]), and checks the result against a
//! single-mode Lorentzian model ([`single_mode`]) and an exact round-trip moment
//! recursion ([`oracle`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// quadrature nodes and oracle values are quoted to their published precision
#![allow(clippy::excessive_precision)]

pub mod bogoliubov;
pub mod comb;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod scalar;
pub mod single_mode;
pub mod spectra;
pub mod verify;

pub use bogoliubov::{coeffs, coeffs_extended, denominator, BogoliubovCoeffs};
pub use comb::{g2_comb, CorrelationComb, FourierCoeffs, KMax};
pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{threshold, CavityParams, GainSetting, PoleParams};
pub use single_mode::{compare_models, g2_single, SingleModeParams};
pub use spectra::{gamma_fn, squeezing_spectrum, upsilon_fn};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
