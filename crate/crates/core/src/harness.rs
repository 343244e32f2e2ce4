//! Degenerating families N(u) → u·A: every term of the asymptotic expansion
//! of log det*Δ_N(u), convergence of rescaled spectral zeta values, and the
//! lattice-sum identity obtained by comparing their lead terms.
//!
//! The harness works in `f64` throughout.

use num_complex::Complex;
use rayon::prelude::*;

use crate::discrete_torus::{log_det_star, spectral_zeta_discrete, DiscreteTorus};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_dt_over_t, QuadratureProblem, TailModel};
use crate::real_torus::{log_det_star_real, zeta_real, zeta_real_ct_at_pole, kronecker_limit_d2, RealTorusDiag};
use crate::scalar::CompensatedSum;
use crate::special_functions::{bessel_i_e, catalan, recip_gamma_complex};
use crate::transforms::i_d;

/// Quadrature tolerance for I_d(0); the lead term multiplies it by V(N).
pub const LEAD_TOL: f64 = 1e-13;
/// Tolerance for the real-torus determinant and zeta values.
pub const REAL_TOL: f64 = 1e-12;

/// A side-length vector α and the increasing u at which to sample N(u).
#[derive(Clone, Debug)]
pub struct DegenerationFamily {
    pub alphas: RealTorusDiag<f64>,
    pub u_values: Vec<u64>,
}

impl DegenerationFamily {
    pub fn new(alphas: Vec<f64>, u_values: Vec<u64>) -> Result<Self> {
        let alphas = RealTorusDiag::new(alphas)?;
        if u_values.is_empty() || u_values[0] == 0 || u_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("u values must be positive and strictly increasing".into()));
        }
        Ok(Self { alphas, u_values })
    }

    /// n_j(u) = round(u·α_j), at least 2.
    pub fn dims_at(&self, u: u64) -> Vec<u64> {
        self.alphas.alphas().iter().map(|&a| ((u as f64) * a).round().max(2.0) as u64).collect()
    }

    pub fn torus_at(&self, u: u64) -> Result<DiscreteTorus> {
        DiscreteTorus::new(self.dims_at(u))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerationRow {
    pub u: u64,
    pub dims: Vec<u64>,
    pub volume: u64,
    pub logdet_discrete: f64,
    /// V(N)·I_d(0).
    pub lead: f64,
    pub log_u2: f64,
    /// log det*Δ_{RT,A}.
    pub const_term: f64,
    /// logdet_discrete − (lead + log_u2 + const_term).
    pub residual: f64,
    /// Bound on the part of the residual due to I_d(0) and the real determinant.
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerationReport {
    pub alphas: Vec<f64>,
    pub i_d0: f64,
    pub i_d0_error: f64,
    pub const_term: f64,
    pub const_term_error: f64,
    pub rows: Vec<DegenerationRow>,
    /// Least-squares slope of log|r(u)| against log u (None with fewer than two nonzero residuals).
    pub decay_slope: Option<f64>,
}

impl DegenerationRow {
    /// The residual recomputed from the stored terms.
    pub fn recompute_residual(&self) -> f64 {
        self.logdet_discrete - (self.lead + self.log_u2 + self.const_term)
    }
}

/// Fits log|r| = a + b·log u and returns b.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 != 0.0).map(|&(u, r)| (u.ln(), r.abs().ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// log det*Δ_N(u) against V(N)·I_d(0) + log u² + log det*Δ_{RT,A} for every u.
pub fn main_theorem_report(f: &DegenerationFamily) -> Result<DegenerationReport> {
    let d = f.alphas.dimension();
    let i_d0 = i_d(d, Complex::new(0.0, 0.0), LEAD_TOL)?.re;
    let const_term = log_det_star_real(&f.alphas, REAL_TOL)?;
    let rows: Vec<Result<DegenerationRow>> = f
        .u_values
        .par_iter()
        .map(|&u| {
            let torus = f.torus_at(u)?;
            let volume = torus.volume();
            let logdet_discrete: f64 = log_det_star(&torus);
            let lead = volume as f64 * i_d0;
            let log_u2 = 2.0 * (u as f64).ln();
            let residual = logdet_discrete - (lead + log_u2 + const_term);
            Ok(DegenerationRow {
                u,
                dims: torus.dims().to_vec(),
                volume,
                logdet_discrete,
                lead,
                log_u2,
                const_term,
                residual,
                error_estimate: volume as f64 * LEAD_TOL + REAL_TOL,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let decay_slope = log_log_slope(&rows.iter().map(|r| (r.u as f64, r.residual)).collect::<Vec<_>>());
    Ok(DegenerationReport {
        alphas: f.alphas.alphas().to_vec(),
        i_d0,
        i_d0_error: LEAD_TOL,
        const_term,
        const_term_error: REAL_TOL,
        rows,
        decay_slope,
    })
}

/// log det*Δ_{(n1,n2)} − [n1n2·4G/π + log(n1n2) + log(|η(iy)|⁴y)] with y = n2/n1.
pub fn d2_expansion_check(n1: u64, n2: u64) -> Result<f64> {
    if n1 < 3 || n2 < 3 {
        return Err(Error::InvalidInput("d2_expansion_check needs n1, n2 ≥ 3".into()));
    }
    let torus = DiscreteTorus::new([n1, n2])?;
    let v = (n1 * n2) as f64;
    let lead = v * 4.0 * catalan::<f64>() / std::f64::consts::PI;
    let y = n2 as f64 / n1 as f64;
    let kron = kronecker_limit_d2(1.0, y)?;
    Ok(log_det_star::<f64>(&torus) - (lead + v.ln() - y.ln() + kron))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaConvergenceRow {
    pub u: u64,
    pub dims: Vec<u64>,
    pub volume: u64,
    pub zeta_discrete: Complex<f64>,
    /// V(N)/Γ(w)·∫₀^{u²}P(t)^d t^w dt/t, zero when the plain form is used.
    pub counterterm: Complex<f64>,
    /// u^{-2w}(ζ_N(w) − counterterm).
    pub lhs: Complex<f64>,
    pub gap: f64,
    pub relative_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaConvergenceReport {
    pub w: Complex<f64>,
    pub regularized: bool,
    pub target: Complex<f64>,
    pub rows: Vec<ZetaConvergenceRow>,
    pub final_gap: f64,
}

/// u^{-2w}ζ_N(u)(w) against its limit.
///
/// For Re(w) > d/2 the limit is ζ_A(w). Otherwise the part of ζ_N carried by
/// the Bessel heat trace on [0, u²] is removed first; the limit is then
/// ζ_A(w) − V(A)(4π)^{-d/2}/((w − d/2)Γ(w)), i.e. the constant term at w = d/2.
pub fn zeta_convergence_report(f: &DegenerationFamily, w: Complex<f64>, tol: f64) -> Result<ZetaConvergenceReport> {
    if !(w.re > 0.0) {
        return Err(Error::Domain(format!("zeta convergence needs Re(w) > 0, got {w}")));
    }
    let a = &f.alphas;
    let d = a.dimension();
    let half = d as f64 / 2.0;
    let regularized = w.re <= half;
    let target = if regularized {
        if w == Complex::new(half, 0.0) {
            Complex::new(zeta_real_ct_at_pole(a, tol)?, 0.0)
        } else {
            let weyl = a.volume() * (4.0 * std::f64::consts::PI).powf(-half);
            zeta_real(a, w, tol)? - recip_gamma_complex(w) * weyl / (w - half)
        }
    } else {
        zeta_real(a, w, tol)?
    };
    let rows: Vec<Result<ZetaConvergenceRow>> = f
        .u_values
        .par_iter()
        .map(|&u| {
            let torus = f.torus_at(u)?;
            let volume = torus.volume();
            let zeta_discrete = spectral_zeta_discrete(&torus, w)?;
            let uf = u as f64;
            let counterterm = if regularized {
                let g = |t: f64| -> Complex<f64> { (w * t.ln()).exp() * bessel_i_e(0, 2.0 * t).powi(d as i32) };
                let upper = uf * uf;
                let p = QuadratureProblem::new(&g, TailModel::PolynomialDecay(half))
                    .upper_limit(upper)
                    .small_t_order(w.re)
                    .abs_tol((tol / volume as f64).max(1e-13));
                volume as f64 * recip_gamma_complex(w) * integrate_dt_over_t(&p)?.value
            } else {
                Complex::new(0.0, 0.0)
            };
            let scale = (-2.0 * w * uf.ln()).exp();
            let lhs = scale * (zeta_discrete - counterterm);
            let gap = (lhs - target).norm();
            Ok(ZetaConvergenceRow {
                u,
                dims: torus.dims().to_vec(),
                volume,
                zeta_discrete,
                counterterm,
                lhs,
                gap,
                relative_gap: gap / target.norm(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let final_gap = rows.last().map_or(f64::NAN, |r| r.gap);
    Ok(ZetaConvergenceReport { w, regularized, target, rows, final_gap })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdIdentity {
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

const ZETA3: f64 = 1.202_056_903_159_594_2;
const DD_CUTOFF: u64 = 200;

/// Σ_{n>N}(n² + a²)^{-2} by Euler–Maclaurin.
fn row_tail(a: f64, big_n: f64) -> f64 {
    let q = big_n * big_n + a * a;
    let integral = if a == 0.0 {
        1.0 / (3.0 * big_n.powi(3))
    } else {
        (a / big_n).atan() / (2.0 * a.powi(3)) - big_n / (2.0 * a * a * q)
    };
    let f = q.powi(-2);
    let fp = -4.0 * big_n * q.powi(-3);
    integral - f / 2.0 - fp / 12.0
}

/// Σ_{k>M} k^{-3}.
fn cube_tail(m: f64) -> f64 {
    let k = m + 1.0;
    1.0 / (2.0 * k * k) + 1.0 / (2.0 * k.powi(3)) + 1.0 / (4.0 * k.powi(4)) - 1.0 / (12.0 * k.powi(6))
}

/// Σ_{(n,m)≠(0,0)} (n² + (my)²)^{-2} by rows.
fn dd_lattice_sum(y: f64) -> f64 {
    let nmax = DD_CUTOFF;
    let row = |m: u64| -> f64 {
        let a = m as f64 * y;
        let mut s = CompensatedSum::new();
        for n in 1..=nmax {
            let nf = n as f64;
            s.add(2.0 * (nf * nf + a * a).powi(-2));
        }
        s.add(2.0 * row_tail(a, nmax as f64));
        if m > 0 {
            s.add(a.powi(-4));
        }
        s.value()
    };
    let rows: Vec<f64> = (0..=DD_CUTOFF).into_par_iter().map(row).collect();
    let mut total = CompensatedSum::new();
    total.add(rows[0]);
    for r in &rows[1..] {
        total.add(2.0 * r);
    }
    // Rows beyond the cutoff: Σ_n (n² + a²)^{-2} = π/(2a³) up to e^{-2πa}.
    total.add(std::f64::consts::PI / y.powi(3) * cube_tail(DD_CUTOFF as f64));
    total.value()
}

/// The lattice sum Σ(n² + (my)²)^{-2} against its q-series evaluation.
pub fn dd_identity_check(y: f64) -> Result<DdIdentity> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("dd_identity_check needs y > 0, got {y}")));
    }
    let pi = std::f64::consts::PI;
    let lhs = dd_lattice_sum(y);
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for m in 1.. {
        let mf = m as f64;
        let x = (-2.0 * pi * y * mf).exp();
        let om = -(-2.0 * pi * y * mf).exp_m1();
        s1.add(x / (mf.powi(3) * om));
        s2.add(x / (mf * mf * om * om));
        if x < 1e-18 {
            break;
        }
    }
    let rhs = (2.0 * pi / y).powi(2)
        * ((2.0 * pi * y).powi(2) / 720.0 + ZETA3 / (4.0 * pi * y) + s1.value() / (2.0 * pi * y) + s2.value());
    Ok(DdIdentity { y, lhs, rhs, residual: (lhs - rhs).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_rule() {
        let f = DegenerationFamily::new(vec![1.0, 0.3], vec![1, 10]).unwrap();
        assert_eq!(f.dims_at(1), vec![2, 2]);
        assert_eq!(f.dims_at(10), vec![10, 3]);
        assert!(DegenerationFamily::new(vec![1.0], vec![4, 4]).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (2f64.powi(k), 3.0 * 2f64.powi(-2 * k))).collect();
        assert!((log_log_slope(&pts).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn dd_identity_at_one() {
        let r = dd_identity_check(1.0).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
    }
}
