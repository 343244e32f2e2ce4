//! Spanning-tree counts modulo word-sized primes, recombined by CRT.
//!
//! For a prime p ≡ 1 (mod L), L = lcm(n_j), F_p contains a primitive L-th
//! root of unity ω, and Λ_K ↦ Σ_j (2 − ω_j^{k_j} − ω_j^{-k_j}) with
//! ω_j = ω^{L/n_j} is a ring map from the cyclotomic integers. The identity
//! V(N)·τ(N) = Π_{K≠0} Λ_K therefore holds in F_p, and each residue costs
//! O(V) multiplications.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::DiscreteTorus;

/// Largest lcm(n_j) the modular path accepts.
pub(crate) const MAX_LCM: u64 = 1 << 40;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes p ≡ 1 (mod l) below 2^62, descending, until their product exceeds 2^bits.
fn primes_for(l: u64, bits: f64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut have = 0.0;
    let mut m = ((1u64 << 62) - 1) / l;
    while have < bits {
        let p = m * l + 1;
        if is_prime(p) {
            primes.push(p);
            have += (p as f64).log2();
        }
        m -= 1;
    }
    primes
}

fn primitive_root_of_order(l: u64, p: u64, factors: &[u64]) -> u64 {
    (2u64..)
        .map(|g| pow_mod(g, (p - 1) / l, p))
        .find(|&h| factors.iter().all(|&q| pow_mod(h, l / q, p) != 1))
        .expect("F_p* is cyclic")
}

fn residue(t: &DiscreteTorus, l: u64, p: u64, factors: &[u64]) -> u64 {
    let omega = primitive_root_of_order(l, p, factors);
    let tables: Vec<Vec<u64>> = t
        .dims()
        .iter()
        .map(|&n| {
            let w = pow_mod(omega, l / n, p);
            let w_inv = pow_mod(w, p - 2, p);
            let mut a = 1u64;
            let mut b = 1u64;
            (0..n)
                .map(|_| {
                    let lam = (2 + 2 * p - a - b) % p;
                    a = mul_mod(a, w, p);
                    b = mul_mod(b, w_inv, p);
                    lam
                })
                .collect()
        })
        .collect();
    let dims = t.dims();
    let mut idx = vec![0usize; dims.len()];
    let mut prod = 1u64;
    for step in 0..t.volume() {
        if step > 0 {
            let lam = idx.iter().zip(&tables).fold(0u64, |s, (&k, tab)| (s + tab[k]) % p);
            prod = mul_mod(prod, lam, p);
        }
        for j in (0..dims.len()).rev() {
            idx[j] += 1;
            if idx[j] < dims[j] as usize {
                break;
            }
            idx[j] = 0;
        }
    }
    mul_mod(prod, pow_mod(t.volume() % p, p - 2, p), p)
}

/// τ(N) from residues modulo enough primes to exceed 2^bits.
pub(crate) fn spanning_trees_crt(t: &DiscreteTorus, bits: f64) -> BigUint {
    let l = t.dims().iter().fold(1u64, |a, &n| a.lcm(&n));
    let factors = prime_factors(l);
    let primes = primes_for(l, bits + 1.0);
    let residues: Vec<u64> = primes.par_iter().map(|&p| residue(t, l, p, &factors)).collect();
    // Garner-style accumulation: x ≡ r_i (mod p_i).
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&p, &r) in primes.iter().zip(&residues) {
        let x_mod = (&x % p).to_u64_digits().first().copied().unwrap_or(0);
        let m_mod = (&modulus % p).to_u64_digits().first().copied().unwrap_or(0);
        let diff = (r + p - x_mod) % p;
        let k = mul_mod(diff, pow_mod(m_mod, p - 2, p), p);
        x += &modulus * k;
        modulus *= p;
    }
    x
}
