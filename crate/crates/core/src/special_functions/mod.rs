//! Bessel functions, Gamma, Catalan's constant and the bounds used to
//! control truncation of Bessel lattice sums.

mod bessel;
pub mod bounds;
mod constants;
mod gamma;

pub use bessel::{
    bessel_i, bessel_i_e, bessel_i_e_eval, bessel_i_eval, bessel_i_scaled, ln_bessel_i, ln_bessel_i_e,
    BesselEval, BesselMethod,
};
pub(crate) use bessel::bessel_i0_minus_one;
pub use constants::{catalan, mellin_bessel_closed};
pub use gamma::{
    cos_pi, gamma, gamma_complex, ln_gamma, recip_gamma, recip_gamma_complex, sin_pi, EULER_GAMMA,
};
