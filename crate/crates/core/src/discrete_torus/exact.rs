//! Exact spanning-tree counts by fraction-free (Bareiss) elimination of the
//! reduced integer Laplacian, with a modular path for large counts.
//!
//! Vertices are ordered by folding every cycle (0, n−1, 1, n−2, …) so that
//! the Laplacian is banded with half-bandwidth about 2·V/n_max. The reduced
//! Laplacian is positive definite, so elimination needs no pivoting and the
//! band is preserved. Rows below the band only ever get rescaled by the ratio
//! of consecutive pivots; that rescaling is deferred until the row enters the
//! band, where it is applied at once as an exact division.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

use super::modular::{spanning_trees_crt, MAX_LCM};
use super::{log_det_star, DiscreteTorus};

/// Default largest V(N) accepted by [`spanning_trees_exact`].
pub const DEFAULT_EXACT_CAP: u64 = 4096;

/// Integer rings the elimination can run in.
pub trait ExactRing: Clone + Integer + Signed + From<i64> + Send + Sync {}

impl ExactRing for i128 {}
impl ExactRing for BigInt {}

/// Number of spanning trees of the Cayley graph of a discrete torus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTreeCount {
    pub value: BigUint,
}

impl fmt::Display for SpanningTreeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

struct Banded {
    size: usize,
    band: usize,
    entries: Vec<(usize, usize, i64)>,
    hadamard_bits: f64,
}

fn folded_positions(n: u64) -> Vec<u64> {
    let mut pos = vec![0u64; n as usize];
    for i in 0..n {
        let k = if i % 2 == 0 { i / 2 } else { n - 1 - i / 2 };
        pos[k as usize] = i;
    }
    pos
}

/// Reduced Laplacian (vertex at position 0 deleted) as a sparse band matrix.
fn reduced_laplacian(t: &DiscreteTorus) -> Banded {
    let dims = t.dims();
    // Largest cycle varies slowest.
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.sort_by(|&a, &b| dims[b].cmp(&dims[a]).then(a.cmp(&b)));
    let mut stride = vec![0u64; dims.len()];
    let mut s = 1u64;
    for &j in order.iter().rev() {
        stride[j] = s;
        s *= dims[j];
    }
    let folds: Vec<Vec<u64>> = dims.iter().map(|&n| folded_positions(n)).collect();
    let v = t.volume() as usize;
    let mut diag = vec![0i64; v];
    let mut off: Vec<(usize, usize, i64)> = Vec::new();
    let mut coords = vec![0u64; dims.len()];
    for _ in 0..v {
        let p: u64 = coords.iter().enumerate().map(|(j, &k)| folds[j][k as usize] * stride[j]).sum();
        for j in 0..dims.len() {
            // Edge {x, x + e_j}; for n_j = 2 both orientations occur, giving the doubled edge.
            let kj = coords[j];
            let next = (kj + 1) % dims[j];
            let q = p - folds[j][kj as usize] * stride[j] + folds[j][next as usize] * stride[j];
            diag[p as usize] += 1;
            diag[q as usize] += 1;
            off.push((p as usize, q as usize, -1));
            off.push((q as usize, p as usize, -1));
        }
        for j in (0..dims.len()).rev() {
            coords[j] += 1;
            if coords[j] < dims[j] {
                break;
            }
            coords[j] = 0;
        }
    }
    let mut entries = Vec::new();
    let mut band = 0usize;
    for (i, &d) in diag.iter().enumerate().skip(1) {
        entries.push((i - 1, i - 1, d));
    }
    for &(a, b, w) in &off {
        if a == 0 || b == 0 {
            continue;
        }
        entries.push((a - 1, b - 1, w));
        band = band.max(a.abs_diff(b));
    }
    // Collapse repeated (row, col) pairs from doubled edges.
    entries.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let mut merged: Vec<(usize, usize, i64)> = Vec::with_capacity(entries.len());
    for e in entries {
        match merged.last_mut() {
            Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
            _ => merged.push(e),
        }
    }
    let mut norm2 = vec![0f64; v.saturating_sub(1)];
    for &(a, _, w) in &merged {
        norm2[a] += (w * w) as f64;
    }
    let hadamard_bits = norm2.iter().map(|&x| 0.5 * x.log2()).sum();
    Banded { size: v.saturating_sub(1), band, entries: merged, hadamard_bits }
}

fn bareiss_banded<R: ExactRing>(m: &Banded) -> R {
    let n = m.size;
    if n == 0 {
        return R::one();
    }
    let b = m.band;
    let width = 2 * b + 1;
    // rows[i][j - i + b] holds entry (i, j) for |i − j| ≤ b.
    let mut rows: Vec<Vec<R>> = vec![vec![R::zero(); width]; n];
    for &(i, j, w) in &m.entries {
        rows[i][j + b - i] = R::from(w);
    }
    let mut level = vec![0usize; n];
    let mut pivots: Vec<R> = Vec::with_capacity(n);
    let pivot_before = |pivots: &Vec<R>, k: usize| if k == 0 { R::one() } else { pivots[k - 1].clone() };

    let catch_up = |row: &mut Vec<R>, lvl: &mut usize, k: usize, pivots: &Vec<R>| {
        if *lvl < k {
            let num = pivot_before(pivots, k);
            let den = pivot_before(pivots, *lvl);
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * num.clone() / den.clone();
                }
            }
            *lvl = k;
        }
    };

    for k in 0..n {
        {
            let (row, lvl) = (&mut rows[k], &mut level[k]);
            catch_up(row, lvl, k, &pivots);
        }
        let pk = rows[k][b].clone();
        let prev = pivot_before(&pivots, k);
        let last = (k + b).min(n - 1);
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for (offset, row) in tail.iter_mut().take(last - k).enumerate() {
            let i = k + 1 + offset;
            catch_up(row, &mut level[i], k, &pivots);
            let a = row[k + b - i].clone();
            let hi = (i + b).min(n - 1);
            for j in (k + 1)..=hi {
                let idx = j + b - i;
                let kj = if j <= k + b { pivot_row[j + b - k].clone() } else { R::zero() };
                let updated = if a.is_zero() {
                    pk.clone() * row[idx].clone()
                } else {
                    pk.clone() * row[idx].clone() - a.clone() * kj
                };
                row[idx] = updated / prev.clone();
            }
            row[k + b - i] = R::zero();
            level[i] = k + 1;
        }
        pivots.push(pk);
    }
    pivots.pop().unwrap()
}

/// Determinant of the reduced Laplacian in the ring `R` (no size cap).
///
/// The caller is responsible for `R` being wide enough; with `i128` the
/// result is only meaningful when the Hadamard bound fits.
pub fn reduced_laplacian_det<R: ExactRing>(t: &DiscreteTorus) -> Result<R> {
    t.check_graph()?;
    Ok(bareiss_banded(&reduced_laplacian(t)))
}

/// Exact spanning-tree count with the default cap of 4096 vertices.
pub fn spanning_trees_exact(t: &DiscreteTorus) -> Result<SpanningTreeCount> {
    spanning_trees_exact_with_cap(t, DEFAULT_EXACT_CAP)
}

/// Exact spanning-tree count; V(N) above `cap` is refused.
pub fn spanning_trees_exact_with_cap(t: &DiscreteTorus, cap: u64) -> Result<SpanningTreeCount> {
    t.check_graph()?;
    if t.volume() > cap {
        return Err(Error::CapExceeded { volume: t.volume(), cap });
    }
    let m = reduced_laplacian(t);
    // Intermediate products are products of two minors, so i128 needs twice the bound.
    let lcm = t.dims().iter().fold(1u64, |a, &n| a.lcm(&n));
    let value = if m.hadamard_bits < 60.0 {
        let d: i128 = bareiss_banded(&m);
        BigUint::from(d as u128)
    } else if lcm <= MAX_LCM {
        spanning_trees_crt(t, m.hadamard_bits)
    } else {
        let d: BigInt = bareiss_banded(&m);
        let (sign, mag) = d.into_parts();
        debug_assert!(sign != Sign::Minus);
        mag
    };
    if value.bits() < 1000 {
        let float = (log_det_star::<f64>(t) - (t.volume() as f64).ln()).exp();
        let exact = value.to_f64().unwrap_or(f64::INFINITY);
        debug_assert!(
            (float / exact - 1.0).abs() < 1e-10,
            "float and exact spanning-tree counts disagree for {:?}: {float} vs {exact}",
            t.dims()
        );
    }
    Ok(SpanningTreeCount { value })
}
