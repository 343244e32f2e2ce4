//! Rigorous bounds on I-Bessel values and an audit that checks them.

use crate::scalar::{c, Real};

use super::bessel::{bessel_i_e, ln_bessel_i, ln_bessel_i_e};

/// Constant C in e^{-t}I_0(t) ≤ C·t^{-1/2}.
pub const I0_DECAY_C: f64 = 0.676_991;

/// Exponent g_x(t) = √(x²+t²) + x·log(t/(x+√(x²+t²))) of Paltsev's sandwich.
pub fn paltsev_exponent<F: Real>(x: F, t: F) -> F {
    let r = (x * x + t * t).sqrt();
    r + x * (t / (x + r)).ln()
}

/// log(√(2π)(x²+t²)^{1/4} I_x(t) e^{-g_x(t)}) and the half-width 1/(2√(x²+t²))
/// of the interval it must lie in.
pub fn paltsev_log_ratio<F: Real>(x: u64, t: F) -> (F, F) {
    let xf = F::from_u64(x).unwrap();
    let r2 = xf * xf + t * t;
    let value = ln_bessel_i(x, t) + c::<F>(0.5) * F::TAU().ln() + c::<F>(0.25) * r2.ln() - paltsev_exponent(xf, t);
    (value, F::one() / (c::<F>(2.0) * r2.sqrt()))
}

/// (t/(t+x))^{x/2}, the bound on √t·e^{-t}I_x(t).
pub fn order_decay_bound<F: Real>(x: F, t: F) -> F {
    (t / (t + x)).powf(x / c(2.0))
}

/// (1 + x/(n0·t))^{-n0·x/2}, the uniform bound on √(n²t)·e^{-n²t}I_{nx}(n²t), n ≥ n0.
pub fn uniform_scaled_bound<F: Real>(x: F, t: F, n0: F) -> F {
    (F::one() + x / (n0 * t)).powf(-n0 * x / c(2.0))
}

/// Tally for one bound in [`audit_bounds`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundTally {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Smallest slack seen (bound minus value, in log space where applicable).
    pub min_slack: f64,
}

/// Result of [`audit_bounds`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsAudit {
    pub samples: usize,
    pub tallies: Vec<BoundTally>,
}

impl BoundsAudit {
    pub fn total_violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton point `i` in dimension `dim` (bases 2, 3, 5, 7).
fn halton(i: u64, dim: usize) -> f64 {
    const BASES: [u64; 4] = [2, 3, 5, 7];
    radical_inverse(i + 1, BASES[dim])
}

impl BoundTally {
    fn new(name: &'static str) -> Self {
        BoundTally { name, checked: 0, violations: 0, min_slack: f64::INFINITY }
    }

    fn record(&mut self, slack: f64) {
        self.checked += 1;
        if !(slack >= 0.0) {
            self.violations += 1;
        }
        self.min_slack = self.min_slack.min(slack);
    }
}

/// Checks Paltsev's sandwich, the e^{-t}I_0(t) decay constant, the order
/// decay bound and the uniform bound on `samples` Halton points: x ∈ [0, 200]
/// (x ≥ 2 for Paltsev), t log-uniform in [1e-3, 1e4]; the uniform bound uses
/// n0 ≤ n ≤ 50, t ∈ [1e-2, 10].
pub fn audit_bounds(samples: usize) -> BoundsAudit {
    let mut paltsev = BoundTally::new("paltsev");
    let mut i0_decay = BoundTally::new("i0_decay");
    let mut order_decay = BoundTally::new("order_decay");
    let mut uniform = BoundTally::new("uniform_scaled");
    let log_uniform = |h: f64, lo: f64, hi: f64| (lo.ln() + h * (hi.ln() - lo.ln())).exp();
    for i in 0..samples as u64 {
        let x = (halton(i, 0) * 201.0).floor().min(200.0) as u64;
        let t = log_uniform(halton(i, 1), 1e-3, 1e4);

        let xp = x.max(2);
        let (ratio, half_width) = paltsev_log_ratio(xp, t);
        paltsev.record(half_width - ratio.abs());

        let e0: f64 = bessel_i_e(0, t);
        i0_decay.record(I0_DECAY_C / t.sqrt() - e0);

        let lhs = 0.5 * t.ln() + ln_bessel_i_e(x, t);
        let xf = x as f64;
        let rhs = 0.5 * xf * (t / (t + xf)).ln();
        order_decay.record(rhs - lhs);

        let n = 1 + (halton(i, 2) * 50.0).floor().min(49.0) as u64;
        let n0 = 1 + (halton(i, 3) * n as f64).floor().min(n as f64 - 1.0) as u64;
        let ts = log_uniform(halton(i, 1), 1e-2, 10.0);
        let nf = n as f64;
        let big_t = nf * nf * ts;
        let lhs = 0.5 * big_t.ln() + ln_bessel_i_e(n * x, big_t);
        let rhs = -(n0 as f64) * xf / 2.0 * (xf / (n0 as f64 * ts)).ln_1p();
        uniform.record(rhs - lhs);
    }
    BoundsAudit { samples, tallies: vec![paltsev, i0_decay, order_decay, uniform] }
}
