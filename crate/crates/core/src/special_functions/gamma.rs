//! Gamma function for real and complex arguments (Lanczos, g = 7, nine terms).

use num_complex::Complex;

use crate::scalar::{c, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler–Mascheroni constant; Γ'(1) = −γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi<F: Real>(x: F) -> F {
    let two = c::<F>(2.0);
    let mut r = x % two;
    if r > F::one() {
        r = r - two;
    } else if r < -F::one() {
        r = r + two;
    }
    if r == F::zero() || r.abs() == F::one() {
        return F::zero();
    }
    (F::PI() * r).sin()
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi<F: Real>(x: F) -> F {
    sin_pi(x + c(0.5))
}

fn is_nonpositive_integer<F: Real>(x: F) -> bool {
    x <= F::zero() && x == x.floor()
}

fn lanczos_sum<F: Real>(z: F) -> F {
    let mut a = c::<F>(LANCZOS[0]);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        a = a + c::<F>(p) / (z + F::from_usize(i).unwrap());
    }
    a
}

/// log|Γ(x)| for real x that is not a nonpositive integer.
pub fn ln_gamma<F: Real>(x: F) -> F {
    if is_nonpositive_integer(x) {
        return F::infinity();
    }
    if x < c(0.5) {
        return F::PI().ln() - sin_pi(x).abs().ln() - ln_gamma(F::one() - x);
    }
    let z = x - F::one();
    let tt = z + c(LANCZOS_G + 0.5);
    c::<F>(0.5) * (F::TAU()).ln() + (z + c(0.5)) * tt.ln() - tt + lanczos_sum(z).ln()
}

/// Γ(x) for real x; infinite at the poles.
pub fn gamma<F: Real>(x: F) -> F {
    if is_nonpositive_integer(x) {
        return F::nan();
    }
    if x < c(0.5) {
        return F::PI() / (sin_pi(x) * gamma(F::one() - x));
    }
    if x > c(140.0) {
        return ln_gamma(x).exp();
    }
    let z = x - F::one();
    let tt = z + c(LANCZOS_G + 0.5);
    F::TAU().sqrt() * tt.powf(z + c(0.5)) * (-tt).exp() * lanczos_sum(z)
}

/// 1/Γ(x), an entire function: exactly zero at 0, −1, −2, …
pub fn recip_gamma<F: Real>(x: F) -> F {
    if is_nonpositive_integer(x) {
        return F::zero();
    }
    if x < c(0.5) {
        return sin_pi(x) * gamma(F::one() - x) / F::PI();
    }
    if x > c(170.0) {
        return (-ln_gamma(x)).exp();
    }
    F::one() / gamma(x)
}

fn sin_pi_complex<F: Real>(z: Complex<F>) -> Complex<F> {
    let pb = F::PI() * z.im;
    Complex::new(sin_pi(z.re) * pb.cosh(), cos_pi(z.re) * pb.sinh())
}

fn lanczos_sum_complex<F: Real>(z: Complex<F>) -> Complex<F> {
    let mut a = Complex::new(c::<F>(LANCZOS[0]), F::zero());
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        a = a + Complex::new(c::<F>(p), F::zero()) / (z + F::from_usize(i).unwrap());
    }
    a
}

/// Principal-branch-free log Γ(z) for Re z ≥ 1/2 (used internally).
fn ln_gamma_right<F: Real>(z: Complex<F>) -> Complex<F> {
    let zm = z - F::one();
    let tt = zm + c::<F>(LANCZOS_G + 0.5);
    (zm + c::<F>(0.5)) * tt.ln() - tt + c::<F>(0.5) * F::TAU().ln() + lanczos_sum_complex(zm).ln()
}

/// Γ(z) for complex z away from the poles.
pub fn gamma_complex<F: Real>(z: Complex<F>) -> Complex<F> {
    if z.im == F::zero() {
        return Complex::new(gamma(z.re), F::zero());
    }
    if z.re < c(0.5) {
        let one = Complex::new(F::one(), F::zero());
        return Complex::new(F::PI(), F::zero()) / (sin_pi_complex(z) * gamma_complex(one - z));
    }
    ln_gamma_right(z).exp()
}

/// 1/Γ(z) for complex z; exactly zero at the nonpositive integers.
pub fn recip_gamma_complex<F: Real>(z: Complex<F>) -> Complex<F> {
    if z.im == F::zero() {
        return Complex::new(recip_gamma(z.re), F::zero());
    }
    if z.re < c(0.5) {
        let one = Complex::new(F::one(), F::zero());
        return sin_pi_complex(z) * gamma_complex(one - z) / F::PI();
    }
    (-ln_gamma_right(z)).exp()
}
