//! Adaptive integration of ∫₀^∞ f(t) dt/t.
//!
//! The integral is taken in v = log t with a global adaptive 7/15-point
//! Gauss–Kronrod rule. Below the lowest panel the integrand is assumed to
//! behave like t^p (p = `small_t_order`); above the highest panel the declared
//! [`TailModel`] supplies (or bounds) the remainder.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, to_f64, Real};

/// Values that can be integrated: real scalars and complex numbers.
pub trait QuadValue<F: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<F, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn norm(&self) -> F;
    fn is_finite(&self) -> bool;
    /// Real and imaginary parts, for error reporting.
    fn parts(&self) -> (f64, f64);
}

impl<F: Real> QuadValue<F> for F {
    fn zero() -> Self {
        F::zero()
    }
    fn norm(&self) -> F {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        F::is_finite(*self)
    }
    fn parts(&self) -> (f64, f64) {
        (to_f64(*self), 0.0)
    }
}

impl<F: Real> QuadValue<F> for Complex<F> {
    fn zero() -> Self {
        Complex::new(F::zero(), F::zero())
    }
    fn norm(&self) -> F {
        self.re.hypot(self.im)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn parts(&self) -> (f64, f64) {
        (to_f64(self.re), to_f64(self.im))
    }
}

/// Behaviour of the integrand as t → ∞.
pub enum TailModel<'a, F, V> {
    /// f(t) ~ C·t^{-p}; the remainder past the last panel is f(T)/p.
    PolynomialDecay(F),
    /// |f(t)| ≲ C·e^{-ct}; the remainder is bounded by |f(T)|/(cT) and dropped.
    ExponentialDecay(F),
    /// The caller supplies ∫_T^∞ f dt/t in closed form for T = `from`.
    AnalyticTail { from: F, tail: &'a (dyn Fn(F) -> V + Sync + 'a) },
}

/// An integral ∫₀^∞ f(t) dt/t (or ∫₀^U when `upper_limit` is set).
pub struct QuadratureProblem<'a, F, V> {
    pub integrand: &'a (dyn Fn(F) -> V + Sync + 'a),
    pub split: F,
    pub abs_tol: F,
    pub tail_model: TailModel<'a, F, V>,
    pub upper_limit: Option<F>,
    /// p in f(t) = O(t^p) as t → 0⁺.
    pub small_t_order: F,
    pub max_evaluations: usize,
}

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_EVALUATIONS: usize = 400_000;

impl<'a, F: Real, V: QuadValue<F>> QuadratureProblem<'a, F, V> {
    pub fn new(integrand: &'a (dyn Fn(F) -> V + Sync + 'a), tail_model: TailModel<'a, F, V>) -> Self {
        QuadratureProblem {
            integrand,
            split: F::one(),
            abs_tol: c(DEFAULT_ABS_TOL),
            tail_model,
            upper_limit: None,
            small_t_order: F::one(),
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn abs_tol(mut self, tol: F) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn split(mut self, split: F) -> Self {
        self.split = split;
        self
    }

    pub fn upper_limit(mut self, upper: F) -> Self {
        self.upper_limit = Some(upper);
        self
    }

    pub fn small_t_order(mut self, p: F) -> Self {
        self.small_t_order = p;
        self
    }

    pub fn max_evaluations(mut self, n: usize) -> Self {
        self.max_evaluations = n;
        self
    }
}

/// Outcome of a successful integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureResult<F, V> {
    pub value: V,
    pub error_estimate: F,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Evaluator<'p, 'a, F, V> {
    f: &'p (dyn Fn(F) -> V + Sync + 'a),
    count: usize,
}

impl<F: Real, V: QuadValue<F>> Evaluator<'_, '_, F, V> {
    fn at_t(&mut self, t: F) -> Result<V> {
        self.count += 1;
        let y = (self.f)(t);
        if !y.is_finite() {
            return Err(Error::NonFinite(to_f64(t)));
        }
        Ok(y)
    }

    fn at_v(&mut self, v: F) -> Result<V> {
        self.at_t(v.exp())
    }
}

#[derive(Clone, Copy)]
struct Panel<F, V> {
    a: F,
    b: F,
    value: V,
    error: F,
    at_floor: bool,
}

fn gauss_kronrod<F: Real, V: QuadValue<F>>(ev: &mut Evaluator<'_, '_, F, V>, a: F, b: F) -> Result<Panel<F, V>> {
    let half = c::<F>(0.5);
    let centre = (a + b) * half;
    let hl = (b - a) * half;
    let fc = ev.at_v(centre)?;
    let mut resk = fc * c::<F>(WGK[7]);
    let mut resg = fc * c::<F>(WG[3]);
    let mut resabs = fc.norm() * c(WGK[7]);
    let mut f1s = [V::zero(); 7];
    let mut f2s = [V::zero(); 7];
    for j in 0..7 {
        let dx = hl * c(XGK[j]);
        let f1 = ev.at_v(centre - dx)?;
        let f2 = ev.at_v(centre + dx)?;
        f1s[j] = f1;
        f2s[j] = f2;
        resk = resk + (f1 + f2) * c::<F>(WGK[j]);
        resabs = resabs + (f1.norm() + f2.norm()) * c(WGK[j]);
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * c::<F>(WG[j / 2]);
        }
    }
    let reskh = resk * half;
    let mut resasc = (fc - reskh).norm() * c(WGK[7]);
    for j in 0..7 {
        resasc = resasc + ((f1s[j] - reskh).norm() + (f2s[j] - reskh).norm()) * c(WGK[j]);
    }
    let hla = hl.abs();
    resasc = resasc * hla;
    resabs = resabs * hla;
    let mut err = ((resk - resg) * hl).norm();
    if resasc != F::zero() && err != F::zero() {
        err = resasc * F::one().min((c::<F>(200.0) * err / resasc).powf(c(1.5)));
    }
    let floor = c::<F>(50.0) * F::epsilon() * resabs;
    let at_floor = err <= floor;
    Ok(Panel { a, b, value: resk * hl, error: err.max(floor), at_floor })
}

struct Ranked<F> {
    error: F,
    seq: usize,
}

impl<F: Real> PartialEq for Ranked<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<F: Real> Eq for Ranked<F> {}
impl<F: Real> PartialOrd for Ranked<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: Real> Ord for Ranked<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn pairwise_sum<F: Real, V: QuadValue<F>>(xs: &[V]) -> V {
    match xs.len() {
        0 => V::zero(),
        1 => xs[0],
        n => pairwise_sum::<F, V>(&xs[..n / 2]) + pairwise_sum::<F, V>(&xs[n / 2..]),
    }
}

fn failure<F: Real, V: QuadValue<F>>(estimate: V, error: F, evaluations: usize) -> Error {
    let (re, im) = estimate.parts();
    Error::NonConvergence { estimate_re: re, estimate_im: im, error_bound: to_f64(error), evaluations }
}

/// Computes ∫₀^∞ f(t) dt/t (or up to the finite `upper_limit`).
///
/// Fails with [`Error::NonFinite`] as soon as the integrand returns NaN or ±∞,
/// and with [`Error::NonConvergence`] (carrying the best estimate and its
/// error bound) when the evaluation budget runs out.
pub fn integrate_dt_over_t<F: Real, V: QuadValue<F>>(p: &QuadratureProblem<'_, F, V>) -> Result<QuadratureResult<F, V>> {
    if !(p.abs_tol > F::zero()) || !(p.split > F::zero()) || !(p.small_t_order > F::zero()) {
        return Err(Error::InvalidInput("abs_tol, split and small_t_order must be positive".into()));
    }
    if let Some(u) = p.upper_limit {
        if !(u > F::zero()) {
            return Err(Error::InvalidInput("upper limit must be positive".into()));
        }
    }
    let mut ev = Evaluator { f: p.integrand, count: 0 };
    let end_tol = p.abs_tol * c(1e-3);
    let step = c::<F>(2.0);

    // Lower end: march down until |f|/p is negligible twice in a row.
    let start = match p.upper_limit {
        Some(u) => p.split.min(u),
        None => p.split,
    };
    let v_floor = F::min_positive_value().ln() * c(0.9);
    let mut v_lo = start.ln() - step;
    let mut quiet = 0;
    let mut lower_value = V::zero();
    let lower_error;
    loop {
        let y = ev.at_v(v_lo)?;
        let bound = y.norm() / p.small_t_order;
        if bound <= end_tol {
            quiet += 1;
            if quiet == 2 {
                lower_value = y * (F::one() / p.small_t_order);
                lower_error = bound;
                break;
            }
        } else {
            quiet = 0;
        }
        if v_lo < v_floor {
            lower_error = bound;
            break;
        }
        v_lo = v_lo - step;
    }

    // Upper end.
    let mut upper_value = V::zero();
    let mut upper_error = F::zero();
    let v_hi = match (p.upper_limit, &p.tail_model) {
        (Some(u), _) => u.ln(),
        (None, TailModel::AnalyticTail { from, tail }) => {
            upper_value = tail(*from);
            if !upper_value.is_finite() {
                return Err(Error::NonFinite(to_f64(*from)));
            }
            from.ln()
        }
        (None, model) => {
            let v_cap = F::max_value().ln() * c(0.3);
            let mut v = p.split.ln().max(F::zero()) + step;
            let mut quiet = 0;
            loop {
                let t = v.exp();
                let y = ev.at_t(t)?;
                let bound = match model {
                    TailModel::PolynomialDecay(q) => y.norm() / *q,
                    TailModel::ExponentialDecay(rate) => y.norm() / (*rate * t),
                    TailModel::AnalyticTail { .. } => unreachable!(),
                };
                if bound <= end_tol {
                    quiet += 1;
                    if quiet == 2 {
                        if let TailModel::PolynomialDecay(q) = model {
                            upper_value = y * (F::one() / *q);
                        }
                        upper_error = bound;
                        break;
                    }
                } else {
                    quiet = 0;
                }
                if v > v_cap {
                    upper_error = bound;
                    break;
                }
                v = v + step;
            }
            v
        }
    };
    if v_hi <= v_lo {
        return Err(Error::InvalidInput("empty integration range".into()));
    }

    // Initial panels of width ≤ 2 in v, with a breakpoint at the split.
    let mut breaks = Vec::new();
    let v_split = p.split.ln();
    let mut v = v_lo;
    breaks.push(v);
    while v + step < v_hi {
        let next = v + step;
        if v < v_split && v_split < next {
            breaks.push(v_split);
        }
        breaks.push(next);
        v = next;
    }
    if v < v_split && v_split < v_hi {
        breaks.push(v_split);
    }
    breaks.push(v_hi);

    let mut panels: Vec<Panel<F, V>> = Vec::new();
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        let panel = gauss_kronrod(&mut ev, w[0], w[1])?;
        heap.push(Ranked { error: panel.error, seq: panels.len() });
        panels.push(panel);
    }
    let mut live: Vec<bool> = vec![true; panels.len()];
    let target = p.abs_tol - lower_error - upper_error;

    let total_error = |panels: &[Panel<F, V>], live: &[bool]| {
        panels.iter().zip(live).filter(|(_, l)| **l).fold(F::zero(), |acc, (q, _)| acc + q.error)
    };
    let mut err_sum = total_error(&panels, &live);
    while err_sum > target {
        let Some(top) = heap.pop() else { break };
        let i = top.seq;
        let panel = panels[i];
        let mid = (panel.a + panel.b) * c(0.5);
        if panel.at_floor || !(mid > panel.a && mid < panel.b) {
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if ev.count > p.max_evaluations {
            heap.push(top);
            break;
        }
        let left = gauss_kronrod(&mut ev, panel.a, mid)?;
        let right = gauss_kronrod(&mut ev, mid, panel.b)?;
        live[i] = false;
        for child in [left, right] {
            heap.push(Ranked { error: child.error, seq: panels.len() });
            panels.push(child);
            live.push(true);
        }
        err_sum = err_sum - panel.error + left.error + right.error;
        if err_sum < F::zero() {
            err_sum = total_error(&panels, &live);
        }
    }
    err_sum = total_error(&panels, &live);

    let mut active: Vec<&Panel<F, V>> = panels.iter().zip(&live).filter(|(_, l)| **l).map(|(q, _)| q).collect();
    active.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let values: Vec<V> = active.iter().map(|q| q.value).collect();
    let value = pairwise_sum::<F, V>(&values) + lower_value + upper_value;
    let error = err_sum + lower_error + upper_error;
    if error <= p.abs_tol {
        Ok(QuadratureResult { value, error_estimate: error, evaluations: ev.count })
    } else {
        Err(failure(value, error, ev.count))
    }
}
