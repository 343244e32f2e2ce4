//! The Gauss-transform split Σ_{Λ≠0} log(s² + Λ) = V(N)·I_d(s) + H_N(s) and
//! the lead-term constant I_d(0).
//!
//! I_d(s) = log(s² + 2d) − ∫₀^∞ e^{-s²t}(P(t)^d − e^{-2dt}) dt/t and
//! H_N(s) = −∫₀^∞ e^{-s²t} R_N(t) dt/t − log s², where P(t) = e^{-2t}I_0(2t)
//! and R_N(t) = θ_N(t) − V(N)·P(t)^d. At s = 0 the two are regularized with
//! e^{-t}, which moves log(2d) into I_d and −1 + e^{-t} into the H integrand.

use num_complex::Complex;
use rayon::prelude::*;

use crate::discrete_torus::{bessel_shell_sum, cycle_theta_excess, epstein_hurwitz_log_product, log_det_star, DiscreteTorus};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_dt_over_t, QuadratureProblem, TailModel};
use crate::scalar::{c, CompensatedSum, Real};
use crate::special_functions::{bessel_i0_minus_one, bessel_i_e};

/// Start of the closed-form large-t tail for integrands built from P(t)^d.
const ASYMPTOTIC_FROM: f64 = 1e6;

fn heat_p<F: Real>(t: F) -> F {
    bessel_i_e(0, c::<F>(2.0) * t)
}

/// P(t)^d − e^{-2dt} without cancellation at small t.
fn power_excess<F: Real>(d: usize, t: F) -> F {
    let df = F::from_usize(d).unwrap();
    if t < c(0.5) {
        (-c::<F>(2.0) * df * t).exp() * (df * bessel_i0_minus_one(c::<F>(2.0) * t).ln_1p()).exp_m1()
    } else {
        heat_p(t).powi(d as i32) - (-c::<F>(2.0) * df * t).exp()
    }
}

/// ∫_T^∞ P(t)^d dt/t from e^{-x}I_0(x) ~ (2πx)^{-1/2}(1 + 1/(8x) + 9/(128x²) + …).
fn power_tail<F: Real>(d: usize, big_t: F) -> F {
    let df = F::from_usize(d).unwrap();
    let h = df / c(2.0);
    let a = df / c(16.0);
    let b = df * c(9.0 / 512.0) + df * (df - F::one()) / c(2.0) * c(1.0 / 256.0);
    let base = (c::<F>(4.0) * F::PI()).powf(-h) * big_t.powf(-h);
    base * (h.recip() + a / ((h + F::one()) * big_t) + b / ((h + c(2.0)) * big_t * big_t))
}

fn zero<F: Real>() -> Complex<F> {
    Complex::new(F::zero(), F::zero())
}

fn check_s<F: Real>(s: Complex<F>) -> Result<Option<Complex<F>>> {
    if s == zero() {
        return Ok(None);
    }
    let s2 = s * s;
    if !(s2.re > F::zero()) {
        return Err(Error::Domain(format!("need Re(s²) > 0 (or s = 0), got s = {s}")));
    }
    Ok(Some(s2))
}

/// I_d(s) for Re(s²) > 0 or s = 0; `tol` bounds the quadrature error.
pub fn i_d<F: Real>(d: usize, s: Complex<F>, tol: F) -> Result<Complex<F>> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be ≥ 1".into()));
    }
    let two_d = c::<F>(2.0) * F::from_usize(d).unwrap();
    match check_s(s)? {
        None => {
            let f = |t: F| power_excess(d, t);
            let tail = |big_t: F| power_tail(d, big_t);
            let p = QuadratureProblem::new(&f, TailModel::AnalyticTail { from: c(ASYMPTOTIC_FROM), tail: &tail })
                .small_t_order(c(2.0))
                .abs_tol(tol);
            let r = integrate_dt_over_t(&p)?;
            Ok(Complex::new(two_d.ln() - r.value, F::zero()))
        }
        Some(s2) => {
            let f = |t: F| (-s2 * t).exp() * power_excess(d, t);
            let p = QuadratureProblem::new(&f, TailModel::ExponentialDecay(s2.re)).small_t_order(c(2.0)).abs_tol(tol);
            let r = integrate_dt_over_t(&p)?;
            Ok((s2 + two_d).ln() - r.value)
        }
    }
}

/// R_N(t) = θ_N(t) − V(N)P(t)^d for t < 1 as V·D with D built from
/// positive terms only: with E_j = 2Σ_{k≥1}e^{-2t}I_{n_j k}(2t),
/// D_1 = E_1 and D_j = D_{j−1}(P + E_j) + P^{j−1}E_j.
fn remainder_small_t<F: Real>(torus: &DiscreteTorus, t: F) -> F {
    let v = F::from_u64(torus.volume()).unwrap();
    let p = heat_p(t);
    let tol = F::epsilon() * t * c(1e-3) / v;
    let mut d_acc = F::zero();
    let mut p_pow = F::one();
    for &n in torus.dims() {
        let e = bessel_shell_sum(n, t, tol);
        d_acc = d_acc * (p + e) + p_pow * e;
        p_pow = p_pow * p;
    }
    v * d_acc
}

/// θ_N(t) − 1 from the factorisation θ_N = Π_j θ_{n_j}.
fn theta_minus_one<F: Real>(torus: &DiscreteTorus, t: F) -> F {
    torus.dims().iter().fold(F::zero(), |acc, &n| acc + cycle_theta_excess(n, t).ln_1p()).exp_m1()
}

fn large_t_from<F: Real>(torus: &DiscreteTorus) -> F {
    let lmin: F = torus.smallest_nonzero_eigenvalue().unwrap_or(F::one());
    c::<F>(ASYMPTOTIC_FROM).max(c::<F>(60.0) / lmin)
}

/// H_N(s) + log s² = −∫₀^∞ e^{-s²t}R_N(t) dt/t, for Re(s²) > 0.
pub fn h_n_plus_log_s2<F: Real>(torus: &DiscreteTorus, s: Complex<F>, tol: F) -> Result<Complex<F>> {
    let s2 = check_s(s)?.ok_or_else(|| Error::Domain("h_n_plus_log_s2 needs s ≠ 0".into()))?;
    let v = F::from_u64(torus.volume()).unwrap();
    let d = torus.dimension();
    let f = |t: F| -> Complex<F> {
        let r = if t < F::one() {
            remainder_small_t(torus, t)
        } else {
            theta_minus_one(torus, t) + F::one() - v * heat_p(t).powi(d as i32)
        };
        (-s2 * t).exp() * r
    };
    let p = QuadratureProblem::new(&f, TailModel::ExponentialDecay(s2.re)).abs_tol(tol);
    Ok(-integrate_dt_over_t(&p)?.value)
}

/// H_N(s) for Re(s²) > 0 or s = 0.
pub fn h_n<F: Real>(torus: &DiscreteTorus, s: Complex<F>, tol: F) -> Result<Complex<F>> {
    match check_s(s)? {
        Some(s2) => Ok(h_n_plus_log_s2(torus, s, tol)? - s2.ln()),
        None => {
            let v = F::from_u64(torus.volume()).unwrap();
            let d = torus.dimension();
            let f = |t: F| -> F {
                if t < F::one() {
                    remainder_small_t(torus, t) + (-t).exp_m1()
                } else {
                    theta_minus_one(torus, t) - v * heat_p(t).powi(d as i32) + (-t).exp()
                }
            };
            // Beyond T only −V·P^d survives (θ − 1 and e^{-t} are below e^{-60}).
            let tail = |big_t: F| -v * power_tail(d, big_t);
            let p = QuadratureProblem::new(&f, TailModel::AnalyticTail { from: large_t_from(torus), tail: &tail })
                .abs_tol(tol);
            Ok(Complex::new(-integrate_dt_over_t(&p)?.value, F::zero()))
        }
    }
}

/// Both sides of the identity Σ_{Λ≠0} log(s²+Λ) = V(N)·I_d(s) + H_N(s).
#[derive(Clone, Copy, Debug)]
pub struct GaussTransformSplit<F> {
    pub s: Complex<F>,
    pub log_product: Complex<F>,
    pub i_d: Complex<F>,
    pub h_n: Complex<F>,
    pub residual: F,
}

/// Evaluates the identity; at s = 0 the left side is log det*Δ.
pub fn gauss_transform_split<F: Real>(torus: &DiscreteTorus, s: Complex<F>, tol: F) -> Result<GaussTransformSplit<F>> {
    let log_product = if s == zero() {
        Complex::new(log_det_star(torus), F::zero())
    } else {
        epstein_hurwitz_log_product(torus, s)?
    };
    let v = F::from_u64(torus.volume()).unwrap();
    let id = i_d(torus.dimension(), s, tol / v)?;
    let h = h_n(torus, s, tol)?;
    let residual = (log_product - id * v - h).norm();
    Ok(GaussTransformSplit { s, log_product, i_d: id, h_n: h, residual })
}

/// |Σ_{Λ≠0} log(s²+Λ) − V(N)·I_d(s) − H_N(s)|.
pub fn verify_theorem36<F: Real>(torus: &DiscreteTorus, s: Complex<F>, tol: F) -> Result<F> {
    Ok(gauss_transform_split(torus, s, tol)?.residual)
}

/// Midpoint rule on an m^d grid for ∫_{[0,1]^d} log(2d − 2Σcos 2πx_j) dx.
pub fn lead_term_riemann<F: Real>(d: usize, m: usize) -> Result<F> {
    if d == 0 || m < 8 {
        return Err(Error::InvalidInput("lead_term_riemann needs d ≥ 1 and m ≥ 8".into()));
    }
    let points = (m as f64).powi(d as i32);
    if points > 4e9 {
        return Err(Error::InvalidInput(format!("grid of {points} points is too large")));
    }
    let mf = F::from_usize(m).unwrap();
    let table: Vec<F> = (0..m)
        .map(|i| {
            let s = (F::PI() * (F::from_usize(i).unwrap() + c(0.5)) / mf).sin();
            c::<F>(4.0) * s * s
        })
        .collect();
    let inner = m.pow(d as u32 - 1);
    let partials: Vec<CompensatedSum<F>> = (0..m)
        .into_par_iter()
        .map(|i0| {
            let mut acc = CompensatedSum::new();
            let mut idx = vec![0usize; d - 1];
            for _ in 0..inner {
                let lam = idx.iter().fold(table[i0], |a, &k| a + table[k]);
                acc.add(lam.ln());
                for j in (0..d - 1).rev() {
                    idx[j] += 1;
                    if idx[j] < m {
                        break;
                    }
                    idx[j] = 0;
                }
            }
            acc
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    Ok(total.value() / mf.powi(d as i32))
}
