//! Spectral invariants of discrete tori Π Z/n_jZ and of their limiting real
//! tori A·Z^d\R^d: spectra, theta functions, spanning-tree counts,
//! regularized determinants, the Bessel-integral transforms relating the two,
//! and a harness that follows degenerating families numerically.
//!
//! The numerical kernels are generic over [`Real`] (`f32` or `f64`); exact
//! spanning-tree counts are generic over an integer ring. The aliases at the
//! crate root fix the scalar to `f64`.

pub mod discrete_torus;
pub mod error;
pub mod harness;
pub mod quadrature;
pub mod real_torus;
pub mod scalar;
pub mod special_functions;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::Real;

pub use discrete_torus::DiscreteTorus;

/// Real torus with `f64` side lengths.
pub type RealTorus = real_torus::RealTorusDiag<f64>;
/// Complex scalar used by the zeta and log-product routines.
pub type Complex64 = num_complex::Complex<f64>;
/// Quadrature result with `f64` values.
pub type QuadratureResult = quadrature::QuadratureResult<f64, f64>;
