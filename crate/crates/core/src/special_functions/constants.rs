use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

use super::gamma::ln_gamma;

static CATALAN: OnceLock<f64> = OnceLock::new();

const PAIRED_TERMS: u64 = 2000;

fn catalan_paired() -> f64 {
    // Pair consecutive terms: G = Σ_k [(4k+1)^{-2} − (4k+3)^{-2}], then close
    // the smooth paired tail with Euler–Maclaurin.
    let f = |k: f64| (4.0 * k + 1.0).powi(-2) - (4.0 * k + 3.0).powi(-2);
    let mut sum = crate::scalar::CompensatedSum::<f64>::new();
    for k in (0..PAIRED_TERMS).rev() {
        sum.add(f(k as f64));
    }
    let k = PAIRED_TERMS as f64;
    let a = 4.0 * k + 1.0;
    let b = 4.0 * k + 3.0;
    let integral = 0.25 * (1.0 / a - 1.0 / b);
    let d1 = -8.0 * (a.powi(-3) - b.powi(-3));
    let d3 = -1536.0 * (a.powi(-5) - b.powi(-5));
    sum.add(integral + 0.5 * f(k) - d1 / 12.0 + d3 / 720.0);
    sum.value()
}

/// Catalan's constant G = Σ_{n≥0} (−1)^n/(2n+1)^2.
pub fn catalan<F: Real>() -> F {
    c(*CATALAN.get_or_init(catalan_paired))
}

/// Γ(s+x)Γ(1/2−s) / (√π Γ(x+1−s)), the Mellin transform of e^{-t/2}I_x(t/2).
pub fn mellin_bessel_closed<F: Real>(x: u64, s: F) -> Result<F> {
    let xf = F::from_u64(x).unwrap();
    if !(s > -xf && s < c(0.5)) {
        return Err(Error::Domain(format!("mellin_bessel_closed needs -{x} < s < 1/2, got s = {s}")));
    }
    let half = c::<F>(0.5);
    let ln = ln_gamma(s + xf) + ln_gamma(half - s) - ln_gamma(xf + F::one() - s) - half * F::PI().ln();
    Ok(ln.exp())
}
