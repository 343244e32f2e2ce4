//! Diagonal real tori A·Z^d\R^d: theta function, spectral zeta and its
//! continuation, the regularized determinant, Epstein zeta, Dedekind eta and
//! the d = 2 Kronecker limit formula.
//!
//! With the split at t = 1,
//! ζ_A(w) = (1/Γ(w))·[P₁(w) + P₃(w)] + V(A)(4π)^{-d/2}/((w − d/2)Γ(w)) − 1/Γ(w+1), where
//! P₁(w) = ∫₀¹ (Θ_A(t) − V(A)(4πt)^{-d/2}) t^w dt/t and
//! P₃(w) = ∫₁^∞ (Θ_A(t) − 1) t^w dt/t. Both pieces are entire in w, so the
//! right-hand side is valid for every w ≠ d/2.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_dt_over_t, QuadratureProblem, TailModel};
use crate::scalar::{c, Real};
use crate::special_functions::{gamma_complex, recip_gamma_complex, EULER_GAMMA};

/// A diagonal real torus with side lengths α_1, …, α_d.
#[derive(Clone, Debug, PartialEq)]
pub struct RealTorusDiag<F> {
    alphas: Vec<F>,
}

impl<F: Real> RealTorusDiag<F> {
    pub fn new(alphas: impl Into<Vec<F>>) -> Result<Self> {
        let alphas = alphas.into();
        if alphas.is_empty() {
            return Err(Error::InvalidInput("a real torus needs at least one dimension".into()));
        }
        if alphas.iter().any(|a| !(*a > F::zero()) || !a.is_finite()) {
            return Err(Error::InvalidInput("side lengths must be positive and finite".into()));
        }
        Ok(RealTorusDiag { alphas })
    }

    pub fn alphas(&self) -> &[F] {
        &self.alphas
    }

    pub fn dimension(&self) -> usize {
        self.alphas.len()
    }

    /// V(A) = Π α_j.
    pub fn volume(&self) -> F {
        self.alphas.iter().fold(F::one(), |a, &b| a * b)
    }

    fn half_dim(&self) -> F {
        F::from_usize(self.dimension()).unwrap() / c(2.0)
    }

    /// V(A)(4π)^{-d/2}, the coefficient of the small-time singularity.
    fn weyl(&self) -> F {
        self.volume() * (c::<F>(4.0) * F::PI()).powf(-self.half_dim())
    }
}

/// 2 Σ_{m≥1} e^{-a m²}, stopped once the Gaussian tail is below `tol`.
fn gauss_excess<F: Real>(a: F, tol: F) -> F {
    let mut sum = F::zero();
    let mut m = F::one();
    loop {
        let term = (-a * m * m).exp();
        sum = sum + term;
        // Σ_{k>m} e^{-ak²} ≤ e^{-a(m+1)²} / (1 − e^{-a(2m+3)})
        let next = m + F::one();
        let tail = (-a * next * next).exp() / -(-a * (c::<F>(2.0) * m + c(3.0))).exp_m1();
        if c::<F>(2.0) * tail <= tol || term == F::zero() {
            break;
        }
        m = next;
    }
    c::<F>(2.0) * sum
}

fn factor_tol<F: Real>(tol: F) -> F {
    tol.min(F::epsilon()) * c(1e-2)
}

/// Θ_A(t) by its spectral sum Π_j Σ_m e^{-(2πm/α_j)² t}.
pub fn theta_real_spectral<F: Real>(a: &RealTorusDiag<F>, t: F, tol: F) -> F {
    let ft = factor_tol(tol);
    a.alphas.iter().fold(F::one(), |acc, &al| {
        let k = F::TAU() / al;
        acc * (F::one() + gauss_excess(k * k * t, ft))
    })
}

/// Θ_A(t) by the dual form V(A)(4πt)^{-d/2} Π_j Σ_k e^{-(α_j k)²/(4t)}.
pub fn theta_real_dual<F: Real>(a: &RealTorusDiag<F>, t: F, tol: F) -> F {
    let ft = factor_tol(tol);
    let lead = a.volume() * (c::<F>(4.0) * F::PI() * t).powf(-a.half_dim());
    a.alphas.iter().fold(lead, |acc, &al| acc * (F::one() + gauss_excess(al * al / (c::<F>(4.0) * t), ft)))
}

/// Θ_A(t): spectral sum for t ≥ 1, dual form for t < 1.
pub fn theta_real<F: Real>(a: &RealTorusDiag<F>, t: F, tol: F) -> F {
    if t >= F::one() {
        theta_real_spectral(a, t, tol)
    } else {
        theta_real_dual(a, t, tol)
    }
}

/// Θ_A(t) − V(A)(4πt)^{-d/2}, free of cancellation for t ≤ 1.
fn small_time_excess<F: Real>(a: &RealTorusDiag<F>, t: F) -> F {
    let ft = factor_tol(F::epsilon());
    let lead = a.volume() * (c::<F>(4.0) * F::PI() * t).powf(-a.half_dim());
    let log_prod = a
        .alphas
        .iter()
        .fold(F::zero(), |acc, &al| acc + gauss_excess(al * al / (c::<F>(4.0) * t), ft).ln_1p());
    lead * log_prod.exp_m1()
}

/// Θ_A(t) − 1, free of cancellation for t ≥ 1.
fn large_time_excess<F: Real>(a: &RealTorusDiag<F>, t: F) -> F {
    let ft = factor_tol(F::epsilon());
    let log_prod = a.alphas.iter().fold(F::zero(), |acc, &al| {
        let k = F::TAU() / al;
        acc + gauss_excess(k * k * t, ft).ln_1p()
    });
    log_prod.exp_m1()
}

#[derive(Clone, Copy, Debug)]
struct Pieces<F> {
    small: Complex<F>,
    large: Complex<F>,
}

fn pieces<F: Real>(a: &RealTorusDiag<F>, w: Complex<F>, tol: F) -> Result<Pieces<F>> {
    let piece_tol = tol / c(4.0);
    let small = |t: F| -> Complex<F> { (w * t.ln()).exp() * small_time_excess(a, t) };
    let p1 = integrate_dt_over_t(
        &QuadratureProblem::new(&small, TailModel::PolynomialDecay(F::one())).upper_limit(F::one()).abs_tol(piece_tol),
    )?;
    // ∫₁^∞ g(t) dt/t = ∫₀¹ g(1/s) ds/s
    let large = |s: F| -> Complex<F> {
        let t = s.recip();
        (w * t.ln()).exp() * large_time_excess(a, t)
    };
    let p3 = integrate_dt_over_t(
        &QuadratureProblem::new(&large, TailModel::PolynomialDecay(F::one())).upper_limit(F::one()).abs_tol(piece_tol),
    )?;
    Ok(Pieces { small: p1.value, large: p3.value })
}

fn check_pole<F: Real>(a: &RealTorusDiag<F>, w: Complex<F>) -> Result<()> {
    if w.im == F::zero() && w.re == a.half_dim() {
        return Err(Error::Pole(format!("w = d/2 = {} (the only pole of ζ_A)", a.half_dim())));
    }
    Ok(())
}

/// Spectral zeta ζ_A(w) = Σ_{m≠0} ((2π)²Σ(m_j/α_j)²)^{-w}, continued to all w ≠ d/2.
pub fn zeta_real<F: Real>(a: &RealTorusDiag<F>, w: Complex<F>, tol: F) -> Result<Complex<F>> {
    check_pole(a, w)?;
    let p = pieces(a, w, tol)?;
    let one = Complex::new(F::one(), F::zero());
    let rg = recip_gamma_complex(w);
    let polar = rg * a.weyl() / (w - a.half_dim());
    Ok(rg * (p.small + p.large) + polar - recip_gamma_complex(w + one))
}

/// Constant term of ζ_A at its pole: lim_{w→d/2} [ζ_A(w) − V(A)/((4π)^{d/2}(w − d/2)Γ(w))].
pub fn zeta_real_ct_at_pole<F: Real>(a: &RealTorusDiag<F>, tol: F) -> Result<F> {
    let h = Complex::new(a.half_dim(), F::zero());
    let p = pieces(a, h, tol)?;
    let rg = recip_gamma_complex(h);
    let v = rg * (p.small + p.large) - recip_gamma_complex(h + F::one());
    Ok(v.re)
}

/// log det*Δ_{RT,A} = −ζ_A'(0).
pub fn log_det_star_real<F: Real>(a: &RealTorusDiag<F>, tol: F) -> Result<F> {
    let p = pieces(a, Complex::new(F::zero(), F::zero()), tol)?;
    let d = F::from_usize(a.dimension()).unwrap();
    let zeta_prime = p.small.re - c::<F>(EULER_GAMMA) - c::<F>(2.0) / d * a.weyl() + p.large.re;
    Ok(-zeta_prime)
}

/// log η(iy) for y > 0, via η(iy) = e^{-πy/12} Π_{n≥1}(1 − e^{-2πny}).
///
/// Arguments below 1 are first mapped by η(i/y) = √y·η(iy).
pub fn ln_dedekind_eta<F: Real>(y: F) -> Result<F> {
    if !(y > F::zero()) || !y.is_finite() {
        return Err(Error::Domain(format!("dedekind_eta needs y > 0, got {y}")));
    }
    if y < F::one() {
        return Ok(ln_dedekind_eta(y.recip())? - c::<F>(0.5) * y.ln());
    }
    let q = (-F::TAU() * y).exp();
    let mut qn = q;
    let mut log_prod = F::zero();
    while qn >= F::epsilon() * c(1e-2) {
        log_prod = log_prod + (-qn).ln_1p();
        qn = qn * q;
    }
    Ok(-F::PI() * y / c(12.0) + log_prod)
}

/// η(iy).
pub fn dedekind_eta<F: Real>(y: F) -> Result<F> {
    Ok(ln_dedekind_eta(y)?.exp())
}

/// log(α₁α₂) + log(y·|η(iy)|⁴) with y = α₂/α₁.
pub fn kronecker_limit_d2<F: Real>(alpha1: F, alpha2: F) -> Result<F> {
    if !(alpha1 > F::zero() && alpha2 > F::zero()) {
        return Err(Error::InvalidInput("side lengths must be positive".into()));
    }
    let y = alpha2 / alpha1;
    Ok((alpha1 * alpha2).ln() + y.ln() + c::<F>(4.0) * ln_dedekind_eta(y)?)
}

fn torus_for_form<F: Real>(q: &[F]) -> Result<RealTorusDiag<F>> {
    if q.iter().any(|x| !(*x > F::zero())) {
        return Err(Error::InvalidInput("diagonal form entries must be positive".into()));
    }
    RealTorusDiag::new(q.iter().map(|&x| x.sqrt().recip()).collect::<Vec<_>>())
}

/// Epstein zeta Z(s, Q) = Σ_{m≠0} (Σ q_j m_j²)^{-s} for diagonal Q, continued
/// to s ≠ d/2 through Z(s, Q) = (2π)^{2s} ζ_A(s) with α_j = q_j^{-1/2}.
pub fn epstein_zeta_diag<F: Real>(q: &[F], s: Complex<F>, tol: F) -> Result<Complex<F>> {
    let a = torus_for_form(q)?;
    let z = zeta_real(&a, s, tol)?;
    Ok((s * c::<F>(2.0) * F::TAU().ln()).exp() * z)
}

/// |π^{-s}Γ(s)Z(s,Q^{-1}) − (det Q)^{1/2}π^{s−d/2}Γ(d/2−s)Z(d/2−s,Q)|.
pub fn epstein_functional_equation_residual<F: Real>(q: &[F], s: Complex<F>, tol: F) -> Result<F> {
    let d = F::from_usize(q.len()).unwrap();
    let half_d = Complex::new(d / c(2.0), F::zero());
    let inv: Vec<F> = q.iter().map(|x| x.recip()).collect();
    let det = q.iter().fold(F::one(), |a, &b| a * b);
    let ln_pi = F::PI().ln();
    let lhs = (-s * ln_pi).exp() * gamma_complex(s) * epstein_zeta_diag(&inv, s, tol)?;
    let r = half_d - s;
    let rhs = ((s - half_d) * ln_pi).exp() * gamma_complex(r) * epstein_zeta_diag(q, r, tol)? * det.sqrt();
    Ok((lhs - rhs).norm())
}
