mod common;

use num_complex::Complex;
use torspec::harness::*;

#[test]
fn one_dimensional_family_is_exact() {
    let f = DegenerationFamily::new(vec![1.0], vec![10, 100, 1000]).unwrap();
    let r = main_theorem_report(&f).unwrap();
    for row in &r.rows {
        assert_eq!(row.dims, vec![row.u]);
        assert!(row.residual.abs() < 1e-8, "{row:?}");
    }
    // log det*_{RT} = 2 log α = 0
    assert!(r.const_term.abs() < 1e-10);
}

#[test]
fn report_is_reproducible() {
    let f = DegenerationFamily::new(vec![1.0, 1.5], vec![6, 12, 24]).unwrap();
    let a = main_theorem_report(&f).unwrap();
    let b = main_theorem_report(&f).unwrap();
    assert_eq!(a, b);
    for row in &a.rows {
        assert_eq!(row.residual.to_bits(), row.recompute_residual().to_bits());
        assert_eq!(row.dims, f.dims_at(row.u));
        assert_eq!(row.volume, row.dims.iter().product::<u64>());
    }
}

#[test]
fn square_family_residuals_shrink() {
    let f = DegenerationFamily::new(vec![1.0, 1.0], vec![8, 16, 32]).unwrap();
    let r = main_theorem_report(&f).unwrap();
    let res: Vec<f64> = r.rows.iter().map(|x| x.residual.abs()).collect();
    assert!(res[0] > res[1] && res[1] > res[2]);
    let slope = r.decay_slope.unwrap();
    assert!(slope < -1.5, "{slope}");
}

#[test]
fn d2_expansion_agrees_with_report() {
    // u = 16, α = (1, 2) gives N = (16, 32)
    let f = DegenerationFamily::new(vec![1.0, 2.0], vec![16]).unwrap();
    let r = main_theorem_report(&f).unwrap();
    let e = d2_expansion_check(16, 32).unwrap();
    assert!((r.rows[0].residual - e).abs() < 1e-8, "{} vs {e}", r.rows[0].residual);
    let r32 = d2_expansion_check(32, 32).unwrap();
    let r64 = d2_expansion_check(64, 64).unwrap();
    assert!(r32.abs() / r64.abs() >= 4.0);
    assert!(d2_expansion_check(2, 8).is_err());
}

#[test]
fn cycle_zeta_convergence_matches_exact_sum() {
    // u^{-2}(n² − 1)/12 against ζ_{(1)}(1) = 1/12, at w = d/2 regularized
    let f = DegenerationFamily::new(vec![1.0], vec![10, 40]).unwrap();
    let z = zeta_convergence_report(&f, Complex::new(1.0, 0.0), 1e-12).unwrap();
    assert!(!z.regularized);
    for row in &z.rows {
        let n = row.u as f64;
        assert!((row.zeta_discrete.re - (n * n - 1.0) / 12.0).abs() < 1e-10 * n * n);
        assert!((row.gap - 1.0 / (12.0 * n * n)).abs() < 1e-12);
    }
}

#[test]
fn zeta_gap_shrinks_for_w_equal_d() {
    let f = DegenerationFamily::new(vec![1.0, 1.0], vec![25, 50, 100, 200]).unwrap();
    let z = zeta_convergence_report(&f, Complex::new(2.0, 0.0), 1e-12).unwrap();
    let gaps: Vec<f64> = z.rows.iter().map(|r| r.gap).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert_eq!(z.final_gap, gaps[3]);
}

#[test]
fn regularized_convergence_below_half_dimension() {
    let f = DegenerationFamily::new(vec![1.0, 2.0], vec![20, 40, 80]).unwrap();
    for w in [Complex::new(1.0, 0.0), Complex::new(0.6, 0.3)] {
        let z = zeta_convergence_report(&f, w, 1e-12).unwrap();
        assert!(z.regularized);
        let gaps: Vec<f64> = z.rows.iter().map(|r| r.gap).collect();
        assert!(gaps[2] < gaps[0] && gaps[2] < 1e-3, "w={w}: {gaps:?}");
    }
    assert!(zeta_convergence_report(&f, Complex::new(-0.1, 0.0), 1e-10).is_err());
}

#[test]
fn dd_identity_and_symmetry() {
    for &y in &[0.5, 0.8, 1.0, 1.3, 2.0] {
        let r = dd_identity_check(y).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        // Σ(n² + (my)²)^{-2} = y^{-4} Σ((n/y)² + m²)^{-2}
        let inv = dd_identity_check(1.0 / y).unwrap();
        assert!((r.lhs - inv.lhs * y.powi(-4)).abs() < 1e-10 * r.lhs);
    }
    assert!(dd_identity_check(0.0).is_err());
}

#[test]
fn family_validation() {
    assert!(DegenerationFamily::new(vec![1.0], vec![]).is_err());
    assert!(DegenerationFamily::new(vec![1.0], vec![0, 3]).is_err());
    assert!(DegenerationFamily::new(vec![-1.0], vec![3]).is_err());
}
