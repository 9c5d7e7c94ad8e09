use super::smoothed::afe_smoothed_with;
use super::*;
use crate::arith::factorize;
use crate::maass::{MaassForm, Parity};
use crate::quad::{CompensatedSum, ComplexSum};
use crate::testdata::{even, odd};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn zero_form(p_max: u64) -> MaassForm {
    MaassForm::synthetic(10.0, Parity::Even, p_max, |_| 0.0).unwrap()
}

#[test]
fn dirichlet_series_of_zero_form_matches_brute_force() {
    // λ(p) = 0 gives λ(p^{2k}) = (-1)^k and λ = 0 off squares, so
    // L(s) = Σ_k liouville(k) k^{-2s}; the oracle sums that directly.
    let form = zero_form(10_000);
    let s = c(3.0, 0.0);
    let mut oracle = CompensatedSum::new();
    for k in (1..=20_000u64).rev() {
        let omega: u32 = factorize(k).iter().map(|(_, e)| e).sum();
        let sign = if omega % 2 == 0 { 1.0 } else { -1.0 };
        oracle.add(sign * (k as f64).powf(-6.0));
    }
    let got = l_dirichlet(&form, s, &spec()).unwrap();
    assert!((got.value.re - oracle.value()).abs() <= got.err_estimate, "{got:?}");
    // the same cutoff applied to the oracle sequence reproduces the partial sum
    let mut partial = CompensatedSum::new();
    for k in (1..100u64).rev() {
        let omega: u32 = factorize(k).iter().map(|(_, e)| e).sum();
        let sign = if omega % 2 == 0 { 1.0 } else { -1.0 };
        partial.add(sign * (k as f64).powf(-6.0) * smooth_cutoff((k * k) as f64 / 10_000.0));
    }
    assert!((got.value.re - partial.value()).abs() < 1e-12);
    assert!(got.value.im.abs() < 1e-15);
    assert_eq!(got.method, LMethod::DirichletSeries);
}

#[test]
fn dirichlet_series_region_contract() {
    let err = l_dirichlet(even(), c(1.0, 0.0), &spec()).unwrap_err();
    assert!(matches!(err, Error::Region { .. }));
}

#[test]
fn dirichlet_series_agrees_with_smoothed_afe() {
    for form in [even(), odd()] {
        for s in [c(2.0, 0.0), c(1.2, 5.0), c(1.5, -30.0)] {
            let d = l_dirichlet(form, s, &spec()).unwrap();
            let a = afe_smoothed(form, s, &spec()).unwrap();
            let bound = d.err_estimate + a.err_estimate;
            assert!((d.value - a.value).norm() <= bound, "{s}: {d:?} vs {a:?}");
            assert!(bound < 1e-7, "{s}: {d:?} {a:?}");
        }
    }
}

#[test]
fn real_on_the_real_axis() {
    for k in 0..=6 {
        let sigma = 1.5 + 0.25 * k as f64;
        let v = l_value(even(), c(sigma, 0.0), &spec()).unwrap();
        assert!(v.value.im.abs() <= spec().abs_tol, "{sigma}: {v:?}");
    }
}

#[test]
fn smoothed_afe_is_independent_of_the_test_function() {
    // Λ(s) = I(s) + ε Ĩ(1 - s) holds for every Gaussian width only with the right
    // gamma factor and root number, so this pins both for each parity.
    for form in [even(), odd()] {
        for s in [c(0.5, 3.0), c(0.5, 40.0), c(0.25, -17.0), c(0.0, 0.0), c(0.9, 2.0)] {
            let a = afe_smoothed_with(form, s, &spec(), 0.3).unwrap();
            let b = afe_smoothed_with(form, s, &spec(), 0.12).unwrap();
            let scale = a.value.norm().max(1.0);
            assert!((a.value - b.value).norm() < 1e-9 * scale, "{} {s}", form.parity());
        }
    }
}

#[test]
fn wrong_root_number_is_detected() {
    // An odd form's coefficients with the even gamma factor break the width independence.
    let data = odd();
    let fake = MaassForm::new(
        data.spectral_param(),
        Parity::Even,
        data.p_max(),
        data.hecke_at_primes().clone(),
        "odd data, even label",
    )
    .unwrap();
    let s = c(0.5, 3.0);
    let a = afe_smoothed_with(&fake, s, &spec(), 0.5).unwrap();
    let b = afe_smoothed_with(&fake, s, &spec(), 0.05).unwrap();
    assert!((a.value - b.value).norm() > 1e-3);
}

#[test]
fn functional_equation_residual_on_grid() {
    for k in 0..30 {
        let re = 0.3 + 0.4 * ((k * 11) % 30) as f64 / 29.0;
        let im = -120.0 + 240.0 * k as f64 / 29.0;
        let s = c(re, im);
        for form in [even(), odd()] {
            let a = completed_l_parts(form, s, &spec()).unwrap();
            let b = completed_l_parts(form, 1.0 - s, &spec()).unwrap();
            let ratio = (b.ln() - a.ln()).exp() * root_number(form);
            assert!((ratio - 1.0).norm() <= 1e-6, "{s}: {ratio}");
        }
    }
    let s = c(0.7, 10.0);
    let a = completed_l(even(), s, &spec()).unwrap();
    let b = completed_l(even(), 1.0 - s, &spec()).unwrap();
    assert!((a.value - b.value).norm() <= 1e-6 * a.value.norm());
}

#[test]
fn completed_value_at_zero_equals_value_at_one() {
    let zero = completed_l(even(), c(0.0, 0.0), &spec()).unwrap();
    let one = completed_l(even(), c(1.0, 0.0), &spec()).unwrap();
    assert!((zero.value - one.value).norm() < 1e-10 * one.value.norm());
    let zero = completed_l(odd(), c(0.0, 0.0), &spec()).unwrap();
    let one = completed_l(odd(), c(1.0, 0.0), &spec()).unwrap();
    assert!((zero.value + one.value).norm() < 1e-10 * one.value.norm());
    assert!(completed_l(odd(), c(0.5, 0.0), &spec()).unwrap().value.is_finite());
}

#[test]
fn reflected_values_use_the_functional_equation() {
    let s = c(-0.5, 7.0);
    let v = l_value(even(), s, &spec()).unwrap();
    assert_eq!(v.method, LMethod::FunctionalEquation);
    let direct = afe_smoothed(even(), s, &spec()).unwrap();
    assert!((v.value - direct.value).norm() < 1e-9 * direct.value.norm());
    let parts = completed_l_parts(even(), c(-1.0, 0.0), &spec()).unwrap();
    let two = completed_l(even(), c(2.0, 0.0), &spec()).unwrap();
    assert!((parts.value() - two.value).norm() < 1e-13 * two.value.norm());
}

#[test]
fn smoothed_afe_error_estimate_is_honest() {
    let loose = QuadratureSpec {
        rel_tol: 1e-6,
        ..QuadratureSpec::default()
    };
    for s in [c(0.5, 25.0), c(0.5, -700.0)] {
        let rough = afe_smoothed(even(), s, &loose).unwrap();
        let fine = afe_smoothed(even(), s, &spec()).unwrap();
        assert!((rough.value - fine.value).norm() <= rough.err_estimate + fine.err_estimate);
    }
}

#[test]
fn smoothed_afe_needs_coefficients() {
    let small = MaassForm::synthetic(13.0, Parity::Even, 30, |_| 0.5).unwrap();
    let err = afe_smoothed(&small, c(0.5, 500.0), &spec()).unwrap_err();
    assert!(matches!(err, Error::InsufficientCoefficients { .. }));
}

/// Composite Simpson rule with a fixed fine step; the oracle for the weight integrals.
fn weight_oracle(tau: f64, y: f64, sign: f64, t_scale: f64, eps: f64) -> Complex64 {
    let h = t_scale.powf(eps);
    let n = 200_000;
    let x = (tau / (2.0 * std::f64::consts::PI * y)).ln();
    let mut acc = ComplexSum::new();
    for k in 0..=n {
        let v = -h + 2.0 * h * k as f64 / n as f64;
        let u = c(eps, v);
        let f = (u * c(x, sign * std::f64::consts::FRAC_PI_2) + u * u).exp() / u;
        let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(f * w);
    }
    acc.value() * (2.0 * h / n as f64 / 3.0) / (2.0 * std::f64::consts::PI)
}

#[test]
fn paper_weight_matches_quadrature_oracle() {
    for (tau, y, sign) in [
        (300.0, 1.0, WeightSign::Plus),
        (300.0, 1.0, WeightSign::Minus),
        (300.0, 3000.0, WeightSign::Minus),
        (60.0, 7.0, WeightSign::Plus),
    ] {
        let s = if sign == WeightSign::Plus { 1.0 } else { -1.0 };
        let got = afe_weight(tau, y, sign, 100.0, 0.1).unwrap();
        let want = weight_oracle(tau, y, s, 100.0, 0.1);
        assert!((got - want).norm() < 1e-10, "{tau} {y}: {got} vs {want}");
    }
}

#[test]
fn paper_weight_symmetry_and_plateau() {
    let plus = afe_weight(300.0, 1.0, WeightSign::Plus, 100.0, 0.1).unwrap();
    let minus = afe_weight(300.0, 1.0, WeightSign::Minus, 100.0, 0.1).unwrap();
    assert!((plus - minus.conj()).norm() < 1e-14);
    // the truncated contour leaves the plateau a few percent below 1
    assert!((plus - 1.0).norm() < 0.05);
    // the untruncated weight decays like exp(-x^2/4); the truncated one keeps ringing
    let far = afe_weight(300.0, 3000.0, WeightSign::Plus, 100.0, 0.1).unwrap();
    assert!(far.norm() > 1e-3 && far.norm() < 0.1);
    assert!(afe_weight(1.0, 1.0, WeightSign::Plus, 100.0, 0.1).is_err());
}

#[test]
fn paper_afe_contract_and_conjugation() {
    let err = l_afe(even(), c(0.5, 1.0), 100.0, &spec()).unwrap_err();
    assert!(matches!(err, Error::Precondition { .. }));
    let a = l_afe(even(), c(0.5, -150.0), 50.0, &spec()).unwrap();
    let b = l_afe(even(), c(0.5, 150.0), 50.0, &spec()).unwrap();
    assert!((a.value - b.value.conj()).norm() < 1e-15);
    assert_eq!(a.method, LMethod::AfePaper);
}

#[test]
fn paper_afe_within_its_error_bars_of_smoothed() {
    let mut rng_state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        (rng_state >> 11) as f64 / (1u64 << 53) as f64
    };
    for k in 0..100 {
        let n = [2.0, 3.0, 4.0][k % 3];
        let t = 20.0 + 380.0 * next();
        let s = c(0.5, -n * t);
        let paper = l_afe(even(), s, t, &spec()).unwrap();
        let smooth = afe_smoothed(even(), s, &spec()).unwrap();
        let gap = (paper.value - smooth.value).norm();
        assert!(gap <= paper.err_estimate + smooth.err_estimate, "n={n} t={t}: {gap}");
    }
}

#[test]
fn adjoint_value_at_one() {
    for form in [even(), odd()] {
        let l = adjoint_l(form, c(1.0, 0.0)).unwrap();
        assert!(l.err_estimate < 1e-11, "{l:?}");
        assert!(l.value.im.abs() < 1e-13 && l.value.re > 0.0);
        let lam = completed_adjoint_l(form, c(1.0, 0.0)).unwrap();
        assert!((lam.value.re * form.rho1_squared().unwrap() - 8.0).abs() < 1e-12);
        assert!(lam.value.im.abs() < 1e-13);
    }
}

#[test]
fn adjoint_value_at_two_matches_series() {
    // ζ(4) Σ λ(n^2) n^{-2} with a smooth cutoff at 9000
    let form = even();
    let mut acc = CompensatedSum::new();
    for n in 1..9000u64 {
        let w = smooth_cutoff(n as f64 / 9000.0);
        acc.add(form.hecke_lambda(n * n).unwrap() * w / (n * n) as f64);
    }
    let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
    let series = zeta4 * acc.value();
    let afe = adjoint_l(form, c(2.0, 0.0)).unwrap();
    assert!((afe.value.re - series).abs() < 1e-6, "{afe:?} vs {series}");
    assert!(completed_adjoint_l(form, c(2.0, 0.0)).unwrap().value.is_finite());
}

#[test]
fn adjoint_smoothed_series_approaches_the_afe_value() {
    let afe = adjoint_l(even(), c(1.0, 0.0)).unwrap().value.re;
    let mut gaps = Vec::new();
    for x in [60.0, 125.0, 250.0] {
        let series = adjoint_l_smoothed_series(even(), x).unwrap();
        let gap = (series.value.re - afe).abs();
        assert!(gap <= series.err_estimate, "x={x}: {series:?} vs {afe}");
        gaps.push(gap);
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn adjoint_contracts() {
    let small = MaassForm::synthetic(10.0, Parity::Even, 5, |_| 0.3).unwrap();
    let err = adjoint_l(&small, c(1.0, 0.0)).unwrap_err();
    assert!(matches!(err, Error::InsufficientCoefficients { .. }));
    // λ(p) = 0 for all p ≤ 2000: only the recursion produces nonzero λ(n^2)
    let zero = zero_form(2000);
    let v = adjoint_l(&zero, c(1.0, 0.0)).unwrap();
    // not automorphic, so only finiteness is meaningful
    assert!(v.value.re.is_finite() && v.err_estimate.is_finite());
    assert!(completed_adjoint_l(even(), c(0.5, 0.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn conjugate_symmetry(re in 0.0f64..1.0, im in 2.0f64..300.0) {
        let a = l_value(even(), c(re, im), &spec()).unwrap();
        let b = l_value(even(), c(re, -im), &spec()).unwrap();
        let scale = a.value.norm().max(1.0);
        prop_assert!((a.value - b.value.conj()).norm() <= 1e-9 * scale);
    }
}
