//! Modified Bessel functions I_x(t) of nonnegative integer order.
//!
//! Everything is computed in the exponentially scaled form e^{-t} I_x(t),
//! carried internally as `mantissa * exp(log_scale)` so that neither huge
//! orders at small argument nor huge arguments underflow or overflow.

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

use super::gamma::ln_gamma;

/// Evaluation branch used for a Bessel value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselMethod {
    /// Power series in (t/2)^2.
    Series,
    /// Large-argument asymptotic expansion of e^{-t} I_x(t).
    ScaledAsymptotic,
    /// Miller backward recurrence normalised by the asymptotic expansion.
    BackwardRecurrence,
}

/// A Bessel value together with the branch that produced it.
#[derive(Clone, Copy, Debug)]
pub struct BesselEval<F> {
    pub order: u64,
    pub argument: F,
    /// I_x(t), or e^{-t} I_x(t) when produced by [`bessel_i_e_eval`].
    pub value: F,
    pub method_used: BesselMethod,
}

#[derive(Clone, Copy, Debug)]
struct Scaled<F> {
    mantissa: F,
    log_scale: F,
    method: BesselMethod,
}

impl<F: Real> Scaled<F> {
    fn value(&self) -> F {
        if self.log_scale == F::zero() {
            self.mantissa
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    fn ln(&self) -> F {
        self.mantissa.ln() + self.log_scale
    }
}

fn rescale_threshold<F: Real>() -> F {
    F::max_value().sqrt().sqrt()
}

fn series<F: Real>(x: u64, t: F) -> Scaled<F> {
    let xf = F::from_u64(x).unwrap();
    let half = t / c(2.0);
    let q = half * half;
    let mut log_scale = if x == 0 {
        -t
    } else {
        xf * half.ln() - ln_gamma(xf + F::one()) - t
    };
    let big = rescale_threshold::<F>();
    let eps = F::epsilon();
    let mut term = F::one();
    let mut sum = F::one();
    let mut n = F::zero();
    loop {
        let ratio = q / ((n + F::one()) * (n + F::one() + xf));
        term = term * ratio;
        sum = sum + term;
        if ratio < c(0.5) && term <= eps * sum * c(0.25) {
            break;
        }
        if sum > big {
            sum = sum / big;
            term = term / big;
            log_scale = log_scale + big.ln();
        }
        n = n + F::one();
    }
    // Fold the scale into the mantissa whenever that is exact enough and safe.
    if log_scale > c(-600.0) && log_scale < c(600.0) && log_scale.exp() * sum > F::min_positive_value() {
        let v = sum * log_scale.exp();
        if v.is_finite() && v > F::zero() {
            return Scaled { mantissa: v, log_scale: F::zero(), method: BesselMethod::Series };
        }
    }
    Scaled { mantissa: sum, log_scale, method: BesselMethod::Series }
}

fn asymptotic<F: Real>(x: u64, t: F) -> F {
    let xf = F::from_u64(x).unwrap();
    let mu = c::<F>(4.0) * xf * xf;
    let eps = F::epsilon();
    let mut term = F::one();
    let mut sum = F::one();
    let mut k = F::one();
    loop {
        let odd = c::<F>(2.0) * k - F::one();
        let next = -term * (mu - odd * odd) / (c::<F>(8.0) * k * t);
        if next.abs() > term.abs() || next == F::zero() {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= eps * sum.abs() * c(0.25) {
            break;
        }
        k = k + F::one();
    }
    sum / (F::TAU() * t).sqrt()
}

fn backward<F: Real>(x: u64, t: F) -> Scaled<F> {
    let m = t.sqrt().floor().to_u64().unwrap_or(0).min(x);
    let xf = F::from_u64(x).unwrap();
    let start = (xf * xf + c::<F>(100.0) * t).sqrt().ceil().to_u64().unwrap_or(x) + 20;
    let big = rescale_threshold::<F>();
    let two_over_t = c::<F>(2.0) / t;
    // f_{k-1} = f_{k+1} + (2k/t) f_k, seeded with f_{N+1} = 0, f_N = 1.
    let mut next = F::zero();
    let mut cur = F::one();
    let mut offset = F::zero();
    let mut at_x = (F::one(), F::zero());
    let mut k = start;
    while k > m {
        let prev = next + two_over_t * F::from_u64(k).unwrap() * cur;
        next = cur;
        cur = prev;
        k -= 1;
        if k == x {
            at_x = (cur, offset);
        }
        if cur > big {
            cur = cur / big;
            next = next / big;
            offset = offset + big.ln();
        }
    }
    let norm = asymptotic(m, t);
    let mantissa = at_x.0 / cur * norm;
    let log_scale = at_x.1 - offset;
    if log_scale == F::zero() {
        Scaled { mantissa, log_scale, method: BesselMethod::BackwardRecurrence }
    } else {
        let folded = mantissa * log_scale.exp();
        if folded > F::min_positive_value() * c(1e20) {
            Scaled { mantissa: folded, log_scale: F::zero(), method: BesselMethod::BackwardRecurrence }
        } else {
            Scaled { mantissa, log_scale, method: BesselMethod::BackwardRecurrence }
        }
    }
}

fn scaled<F: Real>(x: u64, t: F) -> Scaled<F> {
    let xf = F::from_u64(x).unwrap();
    if t <= c::<F>(30.0).max(c::<F>(2.0) * xf) {
        series(x, t)
    } else if xf * xf <= t {
        Scaled { mantissa: asymptotic(x, t), log_scale: F::zero(), method: BesselMethod::ScaledAsymptotic }
    } else {
        backward(x, t)
    }
}

fn trivial<F: Real>(x: u64, t: F) -> Option<F> {
    if t.is_nan() || t < F::zero() {
        return Some(F::nan());
    }
    if t == F::zero() {
        return Some(if x == 0 { F::one() } else { F::zero() });
    }
    if t.is_infinite() {
        return Some(F::zero());
    }
    None
}

/// e^{-t} I_x(t) for integer order x ≥ 0 and t ≥ 0. NaN for negative or NaN t.
///
/// I_{-x} = I_x, so negative orders are served by passing |x|.
pub fn bessel_i_e<F: Real>(x: u64, t: F) -> F {
    if let Some(v) = trivial(x, t) {
        return v;
    }
    scaled(x, t).value()
}

/// [`bessel_i_e`] together with the branch used.
pub fn bessel_i_e_eval<F: Real>(x: u64, t: F) -> BesselEval<F> {
    if let Some(v) = trivial(x, t) {
        return BesselEval { order: x, argument: t, value: v, method_used: BesselMethod::Series };
    }
    let s = scaled(x, t);
    BesselEval { order: x, argument: t, value: s.value(), method_used: s.method }
}

/// log(e^{-t} I_x(t)); finite even where the value itself underflows.
pub fn ln_bessel_i_e<F: Real>(x: u64, t: F) -> F {
    if let Some(v) = trivial(x, t) {
        return v.ln();
    }
    scaled(x, t).ln()
}

/// log I_x(t).
pub fn ln_bessel_i<F: Real>(x: u64, t: F) -> F {
    ln_bessel_i_e(x, t) + t
}

/// I_x(t). Fails with [`Error::Overflow`] when the value is not representable.
pub fn bessel_i<F: Real>(x: u64, t: F) -> Result<F> {
    Ok(bessel_i_eval(x, t)?.value)
}

/// [`bessel_i`] together with the branch used.
pub fn bessel_i_eval<F: Real>(x: u64, t: F) -> Result<BesselEval<F>> {
    if t.is_nan() || t < F::zero() || t.is_infinite() {
        return Err(Error::Domain(format!("bessel_i argument must be finite and nonnegative, got {t}")));
    }
    if let Some(v) = trivial(x, t) {
        return Ok(BesselEval { order: x, argument: t, value: v, method_used: BesselMethod::Series });
    }
    let s = scaled(x, t);
    let ln_value = s.ln() + t;
    if ln_value >= F::max_value().ln() {
        return Err(Error::Overflow(format!("I_{x}({t}) exceeds the representable range; use bessel_i_e")));
    }
    let value = if s.log_scale == F::zero() && t < F::max_value().ln() {
        s.mantissa * t.exp()
    } else {
        ln_value.exp()
    };
    Ok(BesselEval { order: x, argument: t, value, method_used: s.method })
}

/// u·e^{-2u²t}·I_n(2u²t) with n = round(u·x), the rescaled heat-kernel factor.
///
/// For n(u)/u → α this tends to (α/√(4πt))·e^{-(αx)²/(4t)} with α = 1 here;
/// callers with another α pass u scaled accordingly.
pub fn bessel_i_scaled<F: Real>(u: F, x: u64, t: F) -> F {
    let order = (u * F::from_u64(x).unwrap()).round().to_u64().unwrap_or(u64::MAX);
    u * bessel_i_e(order, c::<F>(2.0) * u * u * t)
}

/// I_0(t) − 1 by its series; intended for t ≤ 1.
pub(crate) fn bessel_i0_minus_one<F: Real>(t: F) -> F {
    let q = t * t / c(4.0);
    let mut term = F::one();
    let mut sum = F::zero();
    let mut n = F::one();
    loop {
        term = term * q / (n * n);
        sum = sum + term;
        if term <= F::epsilon() * sum * c(0.1) {
            return sum;
        }
        n = n + F::one();
    }
}
