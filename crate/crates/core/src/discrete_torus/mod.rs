//! Discrete tori DT_N = Π Z/n_jZ: spectrum, theta functions, heat kernel,
//! log-determinants, spectral zeta and exact spanning-tree counts.

mod exact;
mod modular;

pub use exact::{
    reduced_laplacian_det, spanning_trees_exact, spanning_trees_exact_with_cap, ExactRing, SpanningTreeCount,
    DEFAULT_EXACT_CAP,
};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{c, CompensatedComplexSum, CompensatedSum, Real};
use crate::special_functions::{bessel_i_e, cos_pi, sin_pi};

/// Indices per parallel work unit. Fixed so that reductions are identical
/// whatever the thread count.
const CHUNK: u64 = 1 << 14;

/// The torus Π_j Z/n_jZ for N = (n_1, …, n_d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteTorus {
    dims: Vec<u64>,
    volume: u64,
}

impl DiscreteTorus {
    /// Requires d ≥ 1, every n_j ≥ 1 and V(N) < 2^64.
    pub fn new(dims: impl Into<Vec<u64>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::InvalidInput("a torus needs at least one dimension".into()));
        }
        if let Some(bad) = dims.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidInput(format!("cycle orders must be ≥ 1, got {bad}")));
        }
        let volume = dims
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::InvalidInput("volume overflows u64".into()))?;
        Ok(DiscreteTorus { dims, volume })
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    /// V(N) = Π n_j.
    pub fn volume(&self) -> u64 {
        self.volume
    }

    /// Graph operations need n_j ≥ 2 in every direction.
    pub fn check_graph(&self) -> Result<()> {
        if self.dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidInput(format!(
                "graph operations need every n_j ≥ 2, got {:?}",
                self.dims
            )));
        }
        Ok(())
    }

    /// Λ_K = Σ_j 4 sin²(πk_j/n_j) for the multi-index K.
    pub fn eigenvalue<F: Real>(&self, k: &[u64]) -> F {
        self.dims.iter().zip(k).map(|(&n, &kj)| cycle_eigenvalue::<F>(n, kj % n)).fold(F::zero(), |a, b| a + b)
    }

    /// Smallest nonzero eigenvalue, or `None` when V(N) = 1.
    pub fn smallest_nonzero_eigenvalue<F: Real>(&self) -> Option<F> {
        self.dims
            .iter()
            .filter(|&&n| n >= 2)
            .map(|&n| cycle_eigenvalue::<F>(n, 1))
            .fold(None, |acc: Option<F>, x| Some(acc.map_or(x, |a| a.min(x))))
    }
}

/// 2 − 2cos(2πk/n), evaluated as 4 sin²(π k'/n) with k' = min(k, n−k).
pub fn cycle_eigenvalue<F: Real>(n: u64, k: u64) -> F {
    let k = k.min(n - k);
    let s = sin_pi(F::from_u64(k).unwrap() / F::from_u64(n).unwrap());
    c::<F>(4.0) * s * s
}

fn cycle_table<F: Real>(n: u64) -> Vec<F> {
    (0..n).map(|k| cycle_eigenvalue(n, k)).collect()
}

/// Lexicographic stream of the V(N) eigenvalues (last index fastest).
#[derive(Clone, Debug)]
pub struct EigenvalueStream<F> {
    tables: Vec<Vec<F>>,
    index: Vec<usize>,
    pos: u64,
    end: u64,
}

impl<F: Real> EigenvalueStream<F> {
    fn with_tables(tables: Vec<Vec<F>>, start: u64, end: u64) -> Self {
        let mut index = vec![0usize; tables.len()];
        let mut rest = start;
        for (j, table) in tables.iter().enumerate().rev() {
            let n = table.len() as u64;
            index[j] = (rest % n) as usize;
            rest /= n;
        }
        EigenvalueStream { tables, index, pos: start, end }
    }
}

impl<F: Real> Iterator for EigenvalueStream<F> {
    type Item = F;

    fn next(&mut self) -> Option<F> {
        if self.pos >= self.end {
            return None;
        }
        let mut lam = F::zero();
        for (table, &k) in self.tables.iter().zip(&self.index) {
            lam = lam + table[k];
        }
        self.pos += 1;
        for j in (0..self.index.len()).rev() {
            self.index[j] += 1;
            if self.index[j] < self.tables[j].len() {
                break;
            }
            self.index[j] = 0;
        }
        Some(lam)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.pos) as usize;
        (n, Some(n))
    }
}

/// All eigenvalues Λ_K in lexicographic order of K.
pub fn spectrum<F: Real>(t: &DiscreteTorus) -> EigenvalueStream<F> {
    spectrum_range(t, 0, t.volume())
}

/// The eigenvalues with lexicographic positions in `start..end`.
pub fn spectrum_range<F: Real>(t: &DiscreteTorus, start: u64, end: u64) -> EigenvalueStream<F> {
    let tables = t.dims.iter().map(|&n| cycle_table(n)).collect();
    EigenvalueStream::with_tables(tables, start, end.min(t.volume()))
}

fn chunks(volume: u64) -> u64 {
    volume.div_ceil(CHUNK)
}

fn reduce_real<F: Real, G: Fn(F) -> F + Sync>(t: &DiscreteTorus, f: G) -> F {
    let tables: Vec<Vec<F>> = t.dims.iter().map(|&n| cycle_table(n)).collect();
    let v = t.volume();
    let partials: Vec<CompensatedSum<F>> = (0..chunks(v))
        .into_par_iter()
        .map(|i| {
            let mut s = CompensatedSum::new();
            for lam in EigenvalueStream::with_tables(tables.clone(), i * CHUNK, ((i + 1) * CHUNK).min(v)) {
                s.add(f(lam));
            }
            s
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

fn reduce_complex<F: Real, G: Fn(F) -> Complex<F> + Sync>(t: &DiscreteTorus, f: G) -> Complex<F> {
    let tables: Vec<Vec<F>> = t.dims.iter().map(|&n| cycle_table(n)).collect();
    let v = t.volume();
    let partials: Vec<CompensatedComplexSum<F>> = (0..chunks(v))
        .into_par_iter()
        .map(|i| {
            let mut s = CompensatedComplexSum::new();
            for lam in EigenvalueStream::with_tables(tables.clone(), i * CHUNK, ((i + 1) * CHUNK).min(v)) {
                s.add(f(lam));
            }
            s
        })
        .collect();
    let mut total = CompensatedComplexSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

/// θ_N(t) = Σ_K e^{-Λ_K t}, summed over the full stream.
pub fn theta_spectral<F: Real>(t: &DiscreteTorus, time: F) -> F {
    reduce_real(t, |lam: F| (-lam * time).exp())
}

/// θ_n(t) − 1 for a single cycle, by its finite spectral sum.
pub(crate) fn cycle_theta_excess<F: Real>(n: u64, time: F) -> F {
    let mut s = CompensatedSum::new();
    for k in 1..n {
        s.add((-cycle_eigenvalue::<F>(n, k) * time).exp());
    }
    s.value()
}

/// Tail bound Σ_{k>K} e^{-2t}I_{nk}(2t) from √T e^{-T}I_x(T) ≤ (T/(T+x))^{x/2}.
fn shell_tail_bound<F: Real>(n: u64, time: F, last: u64) -> F {
    let big_t = c::<F>(2.0) * time;
    let b = |k: u64| {
        let x = F::from_u64(n * k).unwrap();
        big_t.sqrt().recip() * (-(x / c(2.0)) * (x / big_t).ln_1p()).exp()
    };
    let b1 = b(last + 1);
    let b2 = b(last + 2);
    let r = b2 / b1;
    if !(r < F::one()) || b1 == F::zero() {
        return b1;
    }
    b1 / (F::one() - r)
}

/// E = 2 Σ_{k≥1} e^{-2t}I_{nk}(2t), truncated once the remaining tail is ≤ `tol`.
pub(crate) fn bessel_shell_sum<F: Real>(n: u64, time: F, tol: F) -> F {
    let big_t = c::<F>(2.0) * time;
    let mut s = CompensatedSum::new();
    let mut k = 1u64;
    loop {
        s.add(bessel_i_e(n * k, big_t));
        if c::<F>(2.0) * shell_tail_bound(n, time, k) <= tol {
            break;
        }
        k += 1;
    }
    c::<F>(2.0) * s.value()
}

/// θ_N(t) = V(N) Π_j Σ_{k∈Z} e^{-2t}I_{n_j k}(2t), with the discarded lattice
/// tail bounded by `tol`.
pub fn theta_bessel<F: Real>(t: &DiscreteTorus, time: F, tol: F) -> F {
    let v = F::from_u64(t.volume()).unwrap();
    let per_dim = tol / (c::<F>(2.0) * F::from_usize(t.dimension()).unwrap() * v);
    let p0 = bessel_i_e(0, c::<F>(2.0) * time);
    t.dims.iter().fold(v, |acc, &n| acc * (p0 + bessel_shell_sum(n, time, per_dim)))
}

fn check_heat_args<F: Real>(n: u64, time: F) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("cycle order must be ≥ 2, got {n}")));
    }
    if !(time > F::zero()) {
        return Err(Error::Domain(format!("time must be positive, got {time}")));
    }
    Ok(())
}

/// Heat kernel on Z/nZ at displacement x: (1/n) Σ_k e^{-λ_k t} e^{2πikx/n}.
pub fn heat_kernel_cycle<F: Real>(n: u64, time: F, x: i64) -> Result<F> {
    check_heat_args(n, time)?;
    let xr = x.rem_euclid(n as i64) as u64;
    let nf = F::from_u64(n).unwrap();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for k in 0..n {
        let w = (-cycle_eigenvalue::<F>(n, k) * time).exp();
        let phase = c::<F>(2.0) * F::from_u64((k * xr) % n).unwrap() / nf;
        re.add(w * cos_pi(phase));
        im.add(w * sin_pi(phase));
    }
    debug_assert!(im.value().abs() <= c(1e-12), "imaginary part {}", im.value());
    Ok(re.value() / nf)
}

/// The same kernel as the periodised Bessel sum e^{-2t} Σ_j I_{x+jn}(2t).
pub fn heat_kernel_cycle_bessel<F: Real>(n: u64, time: F, x: i64, tol: F) -> Result<F> {
    check_heat_args(n, time)?;
    let xr = x.rem_euclid(n as i64) as u64;
    let big_t = c::<F>(2.0) * time;
    let mut s = CompensatedSum::new();
    // orders xr, xr + n, xr + 2n, … and n − xr, 2n − xr, …
    let mut j = 0u64;
    loop {
        let up = xr + j * n;
        let down = (j + 1) * n - xr;
        s.add(bessel_i_e(up, big_t));
        s.add(bessel_i_e(down, big_t));
        // Remaining orders are ≥ (j+1)n in both directions and I_x decreases in x.
        if c::<F>(2.0) * shell_tail_bound(n, time, j) <= tol {
            break;
        }
        j += 1;
    }
    Ok(s.value())
}

/// log det*Δ = Σ_{Λ≠0} log Λ.
pub fn log_det_star<F: Real>(t: &DiscreteTorus) -> F {
    reduce_real(t, |lam: F| if lam > F::zero() { lam.ln() } else { F::zero() })
}

/// ζ_N(w) = Σ_{Λ≠0} Λ^{-w} for Re(w) > 0.
pub fn spectral_zeta_discrete<F: Real>(t: &DiscreteTorus, w: Complex<F>) -> Result<Complex<F>> {
    if !(w.re > F::zero()) {
        return Err(Error::Domain(format!("spectral_zeta_discrete needs Re(w) > 0, got {w}")));
    }
    Ok(reduce_complex(t, |lam: F| {
        if lam > F::zero() {
            (-w * lam.ln()).exp()
        } else {
            Complex::new(F::zero(), F::zero())
        }
    }))
}

/// Σ_{Λ≠0} log(s² + Λ) on the principal branch.
pub fn epstein_hurwitz_log_product<F: Real>(t: &DiscreteTorus, s: Complex<F>) -> Result<Complex<F>> {
    let s2 = s * s;
    if let Some(lmin) = t.smallest_nonzero_eigenvalue::<F>() {
        if s2.im == F::zero() && s2.re + lmin <= F::zero() {
            return Err(Error::Branch(format!("s² + Λ lies on (−∞, 0] for s = {s}")));
        }
    }
    Ok(reduce_complex(t, |lam: F| {
        if lam > F::zero() {
            (s2 + lam).ln()
        } else {
            Complex::new(F::zero(), F::zero())
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(t: &DiscreteTorus) -> Vec<f64> {
        let mut v: Vec<f64> = spectrum(t).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn small_spectra() {
        let s = sorted(&DiscreteTorus::new([3]).unwrap());
        assert_eq!(s[0], 0.0);
        assert!((s[1] - 3.0).abs() < 1e-15 && (s[2] - 3.0).abs() < 1e-15);
        let s = sorted(&DiscreteTorus::new([2, 2]).unwrap());
        assert_eq!(s, vec![0.0, 4.0, 4.0, 8.0]);
    }

    #[test]
    fn range_matches_full_stream() {
        let t = DiscreteTorus::new([3, 4, 5]).unwrap();
        let full: Vec<f64> = spectrum(&t).collect();
        let mid: Vec<f64> = spectrum_range(&t, 17, 41).collect();
        assert_eq!(&full[17..41], &mid[..]);
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(DiscreteTorus::new(Vec::<u64>::new()).is_err());
        assert!(DiscreteTorus::new([3, 0]).is_err());
        assert!(DiscreteTorus::new([1, 3]).unwrap().check_graph().is_err());
    }

    #[test]
    fn theta_two_by_two() {
        let t = DiscreteTorus::new([2, 2]).unwrap();
        let expected = 1.0 + 2.0 * (-4.0f64).exp() + (-8.0f64).exp();
        assert!((theta_spectral(&t, 1.0) - expected).abs() < 1e-15);
        assert!((theta_bessel(&t, 1.0, 1e-12) - expected).abs() < 1e-10);
    }

    #[test]
    fn log_det_examples() {
        let t = DiscreteTorus::new([5]).unwrap();
        assert!((log_det_star::<f64>(&t) - 25f64.ln()).abs() < 1e-13);
        let t = DiscreteTorus::new([3, 3]).unwrap();
        assert!((log_det_star::<f64>(&t) - 104_976f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zeta_two_by_two() {
        let t = DiscreteTorus::new([2, 2]).unwrap();
        let z = spectral_zeta_discrete(&t, Complex::new(1.0f64, 0.0)).unwrap();
        assert!((z.re - 0.625).abs() < 1e-15 && z.im == 0.0);
        assert!(spectral_zeta_discrete(&t, Complex::new(0.0f64, 1.0)).is_err());
    }

    #[test]
    fn log_product_branch() {
        let t = DiscreteTorus::new([4]).unwrap();
        assert!(epstein_hurwitz_log_product(&t, Complex::new(0.0f64, 2.0)).is_err());
        let v = epstein_hurwitz_log_product(&t, Complex::new(0.0f64, 0.0)).unwrap();
        assert!((v.re - log_det_star::<f64>(&t)).abs() < 1e-14);
    }

    #[test]
    fn heat_kernel_forms_agree() {
        let a = heat_kernel_cycle(5, 1.0f64, 2).unwrap();
        let b = heat_kernel_cycle_bessel(5, 1.0f64, 2, 1e-15).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} {b}");
        assert!((heat_kernel_cycle(7, 1e-9f64, 0).unwrap() - 1.0).abs() < 1e-8);
        assert!(heat_kernel_cycle(7, 1e-9f64, 3).unwrap().abs() < 1e-8);
    }
}
