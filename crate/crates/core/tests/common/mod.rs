//! Reference values computed independently of the library.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const PI: f64 = std::f64::consts::PI;

/// Catalan's constant from G = (π/8)log(2+√3) + (3/8)Σ (n!)²/((2n)!(2n+1)²).
pub fn catalan() -> f64 {
    let mut term = 1.0f64; // (n!)²/(2n)!
    let mut sum = 0.0;
    for n in 0..60 {
        let k = (2 * n + 1) as f64;
        sum += term / (k * k);
        let nf = (n + 1) as f64;
        term *= nf * nf / ((2.0 * nf - 1.0) * 2.0 * nf);
    }
    PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * sum
}

/// Riemann ζ(s) for real s ≠ 1 by Euler–Maclaurin with N = 30.
pub fn riemann_zeta(s: f64) -> f64 {
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let n = 30.0f64;
    let mut sum: f64 = (1..30).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut fact = 2.0; // (2k)!
    for (k, b) in B.iter().enumerate() {
        let k2 = 2 * (k + 1);
        sum += b / fact * rising * n.powf(-s - k2 as f64 + 1.0);
        rising *= (s + k2 as f64 - 1.0) * (s + k2 as f64);
        fact *= ((k2 + 1) * (k2 + 2)) as f64;
    }
    sum
}

/// I_n(x) = (1/π)∫₀^π e^{x cos θ}cos(nθ)dθ, scaled by e^{-x}, by the trapezoid rule.
pub fn bessel_i_e_trapezoid(n: u32, x: f64) -> f64 {
    let m = 4000;
    let h = PI / m as f64;
    let mut s = 0.0;
    for j in 0..=m {
        let th = j as f64 * h;
        let w = if j == 0 || j == m { 0.5 } else { 1.0 };
        s += w * (x * (th.cos() - 1.0)).exp() * (n as f64 * th).cos();
    }
    s * h / PI
}

fn vertex_index(dims: &[u64], coords: &[u64]) -> usize {
    coords.iter().zip(dims).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
}

/// Edge list (with multiplicity) of the torus Cayley graph.
pub fn torus_edges(dims: &[u64]) -> (usize, Vec<(usize, usize)>) {
    let v: u64 = dims.iter().product();
    let mut edges = Vec::new();
    let mut coords = vec![0u64; dims.len()];
    for _ in 0..v {
        let a = vertex_index(dims, &coords);
        for j in 0..dims.len() {
            let mut next = coords.clone();
            next[j] = (coords[j] + 1) % dims[j];
            edges.push((a, vertex_index(dims, &next)));
        }
        for j in (0..dims.len()).rev() {
            coords[j] += 1;
            if coords[j] < dims[j] {
                break;
            }
            coords[j] = 0;
        }
    }
    (v as usize, edges)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Spanning trees by enumerating all (V−1)-subsets of edges.
pub fn brute_force_trees(dims: &[u64]) -> u64 {
    let (v, edges) = torus_edges(dims);
    let k = v - 1;
    let e = edges.len();
    let mut chosen: Vec<usize> = (0..k).collect();
    let mut count = 0u64;
    loop {
        let mut parent: Vec<usize> = (0..v).collect();
        let mut ok = true;
        for &i in &chosen {
            let (a, b) = edges[i];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                ok = false;
                break;
            }
            parent[ra] = rb;
        }
        if ok {
            count += 1;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            if chosen[i] < e - k + i {
                chosen[i] += 1;
                for j in i + 1..k {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// det of the reduced Laplacian by Gaussian elimination over the rationals.
pub fn rational_trees(dims: &[u64]) -> BigInt {
    let (v, edges) = torus_edges(dims);
    let mut m = vec![vec![BigRational::zero(); v]; v];
    for &(a, b) in &edges {
        m[a][a] += BigRational::one();
        m[b][b] += BigRational::one();
        m[a][b] -= BigRational::one();
        m[b][a] -= BigRational::one();
    }
    let mut m: Vec<Vec<BigRational>> = m.into_iter().skip(1).map(|r| r.into_iter().skip(1).collect()).collect();
    let n = v - 1;
    let mut det = BigRational::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero()).expect("singular");
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= pivot.clone();
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = m[r][k].clone() / pivot.clone();
            for c in k..n {
                let t = f.clone() * m[k][c].clone();
                m[r][c] -= t;
            }
        }
    }
    assert!(det.is_integer() && !det.is_negative());
    det.to_integer()
}

/// All Laplacian eigenvalues by the cosine formula, in lexicographic order.
pub fn eigenvalues_direct(dims: &[u64]) -> Vec<f64> {
    let v: u64 = dims.iter().product();
    let mut out = Vec::with_capacity(v as usize);
    let mut k = vec![0u64; dims.len()];
    for _ in 0..v {
        out.push(
            k.iter().zip(dims).map(|(&k, &n)| 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).sum::<f64>(),
        );
        for j in (0..dims.len()).rev() {
            k[j] += 1;
            if k[j] < dims[j] {
                break;
            }
            k[j] = 0;
        }
    }
    out
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
