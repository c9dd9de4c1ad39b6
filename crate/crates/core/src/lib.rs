//! Quantized Liénard-type oscillator `x'' + k x x' + k^2 x^3 / 9 + w^2 x = 0`.
//!
//! The classical model, its position-dependent-mass quantization in momentum
//! space, the supersymmetric solution and independent numerical checks of it.

pub mod classical;
pub mod eigensolver;
pub mod error;
pub mod grid;
pub mod params;
pub mod quantize;
pub mod specfun;
pub mod susy;
pub mod wavefn;

pub use error::{Error, Result};
pub use params::{derive_params, momentum_domain, AmbiguityParams, DerivedParams, Model, MomentumDomain, PhysicalParams};
