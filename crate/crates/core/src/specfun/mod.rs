//! Special functions used by the eigenfunctions and their limit studies.

mod gamma;
mod orthopoly;
mod quadrature;

pub use gamma::{ln_factorial, log_gamma};
pub use orthopoly::{hermite, hermite_derivative, laguerre_assoc, laguerre_assoc_derivative};
pub use quadrature::{gauss_legendre, quadrature_nodes, CompositeRule};
