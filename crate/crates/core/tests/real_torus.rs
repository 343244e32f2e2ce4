mod common;

use common::{catalan, riemann_zeta, PI};
use num_complex::Complex;
use proptest::prelude::*;
use torspec::real_torus::*;
use torspec::{Error, RealTorus};

const EULER: f64 = 0.577_215_664_901_532_9;

fn cz(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

#[test]
fn one_dimensional_zeta_is_riemann() {
    // ζ_α(w) = 2(2π/α)^{-2w} ζ(2w)
    for &alpha in &[1.0, 0.7, 3.0] {
        let a = RealTorus::new(vec![alpha]).unwrap();
        for &w in &[0.8, 1.0, 2.0, -0.3, 0.2] {
            let z = zeta_real(&a, cz(w), 1e-12).unwrap();
            let oracle = 2.0 * (2.0 * PI / alpha).powf(-2.0 * w) * riemann_zeta(2.0 * w);
            assert!((z.re - oracle).abs() < 1e-10 * oracle.abs().max(1.0), "α={alpha} w={w}: {} vs {oracle}", z.re);
        }
        let ld = log_det_star_real(&a, 1e-12).unwrap();
        assert!((ld - 2.0 * alpha.ln()).abs() < 1e-10);
    }
}

#[test]
fn constant_term_at_pole_in_one_dimension() {
    let a = RealTorus::new(vec![1.0]).unwrap();
    let ct = zeta_real_ct_at_pole(&a, 1e-12).unwrap();
    assert!((ct - (EULER - 2.0 * (4.0 * PI).ln()) / (2.0 * PI)).abs() < 1e-10, "{ct}");
    assert!(matches!(zeta_real(&a, cz(0.5), 1e-10), Err(Error::Pole(_))));
}

#[test]
fn square_lattice_at_two() {
    // Σ_{(n,m)≠0}(n²+m²)^{-2} = 4ζ(2)G
    let a = RealTorus::new(vec![1.0, 1.0]).unwrap();
    let lattice = 4.0 * PI * PI / 6.0 * catalan();
    assert!((lattice - 6.026_812_039_6).abs() < 1e-9);
    let z = zeta_real(&a, cz(2.0), 1e-13).unwrap();
    assert!((z.re * (2.0 * PI).powi(4) - lattice).abs() < 1e-9);
}

#[test]
fn zeta_at_zero_is_minus_one() {
    for alphas in [vec![1.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 1.0, 1.0], vec![0.4, 2.5, 1.3]] {
        let a = RealTorus::new(alphas.clone()).unwrap();
        let z = zeta_real(&a, cz(0.0), 1e-12).unwrap();
        assert!((z.re + 1.0).abs() < 1e-10, "{alphas:?}: {z}");
    }
}

#[test]
fn kronecker_limit_matches_zeta_derivative() {
    for &a1 in &[0.5, 1.0, 2.0] {
        for &a2 in &[0.5, 1.0, 2.0] {
            let a = RealTorus::new(vec![a1, a2]).unwrap();
            let ld = log_det_star_real(&a, 1e-12).unwrap();
            let k = kronecker_limit_d2(a1, a2).unwrap();
            assert!((ld - k).abs() < 1e-9, "({a1},{a2}): {ld} vs {k}");
        }
    }
}

#[test]
fn eta_values() {
    let gamma_quarter = 3.625_609_908_221_908;
    let eta_i = gamma_quarter / (2.0 * PI.powf(0.75));
    assert!((dedekind_eta(1.0f64).unwrap() - eta_i).abs() < 1e-14);
    assert!((4.0 * ln_dedekind_eta(1.0f64).unwrap() + 1.054_688_281_0).abs() < 1e-9);
    // direct product without the modular map
    for &y in &[0.5, 0.8, 1.7] {
        let q = (-2.0 * PI * y).exp();
        let mut v = (-PI * y / 12.0).exp();
        let mut qn = q;
        while qn > 1e-20 {
            v *= 1.0 - qn;
            qn *= q;
        }
        assert!((dedekind_eta(y).unwrap() - v).abs() < 1e-14 * v);
    }
    assert!(dedekind_eta(0.0f64).is_err());
}

#[test]
fn epstein_functional_equation() {
    for &s in &[0.3, 0.7, 1.6, 2.2] {
        let r = epstein_functional_equation_residual(&[1.0, 1.0], cz(s), 1e-12).unwrap();
        assert!(r < 1e-9, "s={s}: {r}");
    }
    let r = epstein_functional_equation_residual(&[1.0, 3.0], Complex::new(0.4, 0.9), 1e-12).unwrap();
    assert!(r < 1e-9, "{r}");
}

#[test]
fn invalid_inputs() {
    assert!(RealTorus::new(vec![1.0, -2.0]).is_err());
    assert!(RealTorus::new(Vec::<f64>::new()).is_err());
    assert!(kronecker_limit_d2(0.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn poisson_summation(a1 in 0.3f64..3.0, a2 in 0.3f64..3.0, t in 0.02f64..5.0) {
        let a = RealTorus::new(vec![a1, a2]).unwrap();
        let s = theta_real_spectral(&a, t, 1e-15);
        let d = theta_real_dual(&a, t, 1e-15);
        prop_assert!((s - d).abs() < 1e-11 * s.max(1.0), "{} vs {}", s, d);
    }

    #[test]
    fn rescaling(alpha in 0.3f64..3.0, w in 0.6f64..3.0) {
        // scaling A by c scales eigenvalues by c^{-2}
        let a = RealTorus::new(vec![1.0, 1.5]).unwrap();
        let b = RealTorus::new(vec![alpha, 1.5 * alpha]).unwrap();
        let za = zeta_real(&a, cz(w), 1e-12).unwrap().re;
        let zb = zeta_real(&b, cz(w), 1e-12).unwrap().re;
        prop_assert!((zb - alpha.powf(2.0 * w) * za).abs() < 1e-9 * zb.abs().max(1.0));
    }
}
