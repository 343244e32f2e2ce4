mod common;

use common::{brute_force_trees, eigenvalues_direct, rational_trees};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use proptest::prelude::*;
use torspec::discrete_torus::*;
use torspec::Error;

fn torus(d: &[u64]) -> DiscreteTorus {
    DiscreteTorus::new(d.to_vec()).unwrap()
}

#[test]
fn trees_match_brute_force_enumeration() {
    for dims in [vec![2u64], vec![5], vec![8], vec![2, 2], vec![2, 3], vec![2, 4], vec![3, 3], vec![2, 2, 2], vec![3, 4]] {
        let exact = spanning_trees_exact(&torus(&dims)).unwrap().value;
        assert_eq!(exact, BigUint::from(brute_force_trees(&dims)), "{dims:?}");
    }
}

#[test]
fn trees_match_rational_elimination() {
    for dims in [vec![4u64, 4], vec![3, 5], vec![2, 3, 4], vec![6, 7], vec![3, 3, 3], vec![9, 9]] {
        let exact = spanning_trees_exact(&torus(&dims)).unwrap().value;
        assert_eq!(BigInt::from(exact), rational_trees(&dims), "{dims:?}");
    }
}

#[test]
fn large_counts_use_big_integers() {
    // V = 4096 at the default cap; count has thousands of bits.
    let t = torus(&[64, 64]);
    let count = spanning_trees_exact(&t).unwrap();
    let log_count = log_det_star::<f64>(&t) - (4096f64).ln();
    let bits = count.value.bits() as f64;
    assert!((bits - log_count / std::f64::consts::LN_2).abs() < 1.5, "{bits} vs {log_count}");
    assert!(matches!(spanning_trees_exact(&torus(&[65, 64])), Err(Error::CapExceeded { .. })));
    assert!(spanning_trees_exact_with_cap(&torus(&[65, 64]), 5000).is_ok());
}

#[test]
fn spectrum_matches_cosine_formula() {
    for dims in [vec![7u64], vec![3, 4], vec![2, 3, 5]] {
        let t = torus(&dims);
        let lib: Vec<f64> = spectrum(&t).collect();
        let direct = eigenvalues_direct(&dims);
        assert_eq!(lib.len(), direct.len());
        for (a, b) in lib.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-13);
        }
        let tail: Vec<f64> = spectrum_range(&t, 3, 7).collect();
        assert_eq!(&lib[3..7], &tail[..]);
    }
}

#[test]
fn smallest_eigenvalue_and_invalid_dims() {
    let t = torus(&[5, 9]);
    let lmin: f64 = t.smallest_nonzero_eigenvalue().unwrap();
    assert!((lmin - 4.0 * (std::f64::consts::PI / 9.0).sin().powi(2)).abs() < 1e-15);
    assert!(DiscreteTorus::new(vec![3, 0]).is_err());
    assert!(DiscreteTorus::new(Vec::<u64>::new()).is_err());
}

#[test]
fn theta_inversion() {
    for dims in [vec![2u64], vec![7], vec![3, 8], vec![2, 5, 6]] {
        let t = torus(&dims);
        for &time in &[0.01, 0.1, 1.0, 10.0, 50.0] {
            let a: f64 = theta_spectral(&t, time);
            let b = theta_bessel(&t, time, 1e-12);
            assert!((a - b).abs() <= 1e-11, "{dims:?} t={time}: {a} vs {b}");
        }
    }
}

#[test]
fn heat_kernel_forms_agree_and_sum_to_one() {
    for &n in &[2u64, 5, 12] {
        for &time in &[0.05, 0.8, 6.0] {
            let mut total = 0.0;
            for x in 0..n as i64 {
                let a: f64 = heat_kernel_cycle(n, time, x).unwrap();
                let b = heat_kernel_cycle_bessel(n, time, x, 1e-14).unwrap();
                assert!((a - b).abs() < 1e-13, "n={n} t={time} x={x}");
                total += a;
            }
            assert!((total - 1.0).abs() < 1e-13);
        }
    }
    assert!(heat_kernel_cycle(1, 1.0f64, 0).is_err());
    assert!(heat_kernel_cycle(4, -1.0f64, 0).is_err());
}

#[test]
fn cycle_determinant_is_n_squared() {
    for n in 2..60u64 {
        let v: f64 = log_det_star(&torus(&[n]));
        assert!((v - 2.0 * (n as f64).ln()).abs() < 1e-12, "n={n}");
    }
}

#[test]
fn cycle_zeta_at_one() {
    // Σ_k (2 − 2cos(2πk/n))^{-1} = (n² − 1)/12
    for n in [3u64, 10, 101] {
        let z = spectral_zeta_discrete(&torus(&[n]), Complex::new(1.0f64, 0.0)).unwrap();
        let exact = ((n * n - 1) as f64) / 12.0;
        assert!((z.re - exact).abs() < 1e-12 * exact && z.im == 0.0);
    }
    assert!(spectral_zeta_discrete(&torus(&[4]), Complex::new(0.0f64, 1.0)).is_err());
}

#[test]
fn log_product_limits() {
    let t = torus(&[4, 6]);
    let at_small: Complex<f64> = epstein_hurwitz_log_product(&t, Complex::new(1e-9, 0.0)).unwrap();
    assert!((at_small.re - log_det_star::<f64>(&t)).abs() < 1e-8);
    assert!(matches!(epstein_hurwitz_log_product(&t, Complex::new(0.0f64, 2.0)), Err(Error::Branch(_))));
}

#[test]
fn reductions_ignore_thread_count() {
    let t = torus(&[300, 301]);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a: f64 = one.install(|| log_det_star(&t));
    let b: f64 = many.install(|| log_det_star(&t));
    assert_eq!(a.to_bits(), b.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_decreasing_and_convex(n1 in 2u64..9, n2 in 2u64..9, t in 0.01f64..5.0, h in 0.01f64..0.5) {
        let tor = torus(&[n1, n2]);
        let a: f64 = theta_spectral(&tor, t);
        let b: f64 = theta_spectral(&tor, t + h);
        let c: f64 = theta_spectral(&tor, t + 2.0 * h);
        prop_assert!(b <= a && b >= 1.0);
        prop_assert!(a + c - 2.0 * b >= -1e-12);
    }

    #[test]
    fn matrix_tree_consistency(n1 in 2u64..12, n2 in 2u64..12) {
        let tor = torus(&[n1, n2]);
        let count = spanning_trees_exact(&tor).unwrap().value;
        let lhs = (count.to_string().parse::<f64>().unwrap()).ln();
        let rhs = log_det_star::<f64>(&tor) - ((n1 * n2) as f64).ln();
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn eigenvalues_bounded(n in proptest::collection::vec(2u64..7, 1..4)) {
        let tor = DiscreteTorus::new(n.clone()).unwrap();
        let d = n.len() as f64;
        let mut zeros = 0;
        for lam in spectrum::<f64>(&tor) {
            prop_assert!((0.0..=4.0 * d + 1e-12).contains(&lam));
            if lam == 0.0 { zeros += 1; }
        }
        prop_assert_eq!(zeros, 1);
    }
}
