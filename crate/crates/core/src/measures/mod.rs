//! Representing measures: the entire kernel, the (2,1) and line densities,
//! the (2,2) factorisation over a quadratic extension and quadrature checks.

pub mod density;
pub mod factor;
pub mod kernel;
pub mod quadext;
pub mod quadrature;
pub mod verify;

pub use density::{sample21_csv, sample_line_csv, weight21_eval, weight22_line_eval, LineDensity, Weight21};
pub use factor::{factorize22, FactorPositivity, Factorization22, LinearFactor};
pub use kernel::{kernel_eval, KernelValue};
pub use quadext::QuadExt;
pub use quadrature::{QuadFailure, Quadrature};
pub use verify::{verify_line_density, verify_moment_integral, DensitySource, MomentReport};
