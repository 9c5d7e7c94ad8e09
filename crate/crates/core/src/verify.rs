//! The named identity suite run by `evlab verify`.
//!
//! Each check measures one residual and compares it with a fixed tolerance. The
//! suite covers the special functions, the Hecke relations and functional equations
//! of every supplied form, the two approximate functional equations, the unfolding
//! identity, the two paths to μ_{n,t} and the Stirling envelope.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::eisen2::{
    bessel_moment, bessel_moment_closed, eisenstein_value, fundamental_domain_volume, i_closed, i_series,
    maass_value, reduce, DomainRule, UpperHalfPoint,
};
use crate::lfun::{afe_smoothed, completed_adjoint_l, completed_l_parts, l_afe, l_dirichlet, root_number};
use crate::maass::{hecke_bound, MaassForm};
use crate::moments::{cross_variance, mean_value, osc_prefactor, weighted_variance};
use crate::specfun::{bessel_k, completed_zeta, gamma, log_gamma, riemann_zeta, QuadratureSpec};
use crate::wimu::{gamma_factor_sq, mu_completed, mu_gamma_form, mu_squared, stirling_gamma_sq, MuContext};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// The measured residual; NaN when the check could not be evaluated.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Error text when the evaluation itself failed.
    pub error: Option<String>,
}

impl CheckResult {
    fn from_residual(name: String, residual: Result<f64>, tolerance: f64) -> Self {
        match residual {
            Ok(r) => Self {
                name,
                residual: r,
                tolerance,
                passed: r <= tolerance,
                error: None,
            },
            Err(e) => Self {
                name,
                residual: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }
}

/// One line per check, `PASS`/`FAIL`, then a count.
pub fn render(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status} {:<44} residual {:.3e} tol {:.1e}", r.name, r.residual, r.tolerance);
        if let Some(e) = &r.error {
            let _ = write!(out, " error: {e}");
        }
        out.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", results.len());
    out
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = 0.0f64;
    for v in values {
        m = m.max(v?);
    }
    Ok(m)
}

fn strip_points(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let re = 0.05 + 0.9 * ((k * 17) % count) as f64 / (count - 1) as f64;
            let im = -60.0 + 120.0 * k as f64 / (count - 1) as f64;
            c(re, im)
        })
        .collect()
}

/// Runs every check on the supplied forms; checks that need an even form use the
/// first even one, and parity checks run for every odd one.
pub fn run_suite(forms: &[&MaassForm], spec: &QuadratureSpec) -> Vec<CheckResult> {
    let mut out = special_function_checks();
    out.extend(domain_checks());
    for form in forms {
        out.extend(form_checks(form, spec));
    }
    if let Some(even) = forms.iter().find(|f| f.is_even()) {
        out.extend(even_form_checks(even, spec));
        out.extend(stirling_checks(even));
    }
    for odd in forms.iter().filter(|f| !f.is_even()) {
        out.extend(odd_form_checks(odd, forms, spec));
    }
    out
}

fn check(out: &mut Vec<CheckResult>, name: impl Into<String>, tolerance: f64, residual: Result<f64>) {
    out.push(CheckResult::from_residual(name.into(), residual, tolerance));
}

fn special_function_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let pts = [c(0.3, 0.0), c(2.5, 1.0), c(-3.7, 0.2), c(0.5, 40.0), c(7.0, -3.0)];
    check(
        &mut out,
        "gamma_recurrence",
        1e-12,
        max_of(pts.iter().map(|&z| Ok(rel(gamma(z + 1.0)?, z * gamma(z)?)))),
    );
    check(
        &mut out,
        "gamma_reflection",
        1e-12,
        max_of(pts[..3].iter().map(|&z| {
            let lhs = gamma(z)? * gamma(1.0 - z)?;
            Ok(rel(lhs, PI / (z * PI).sin()))
        })),
    );
    check(&mut out, "gamma_half", 1e-14, Ok(rel(gamma(c(0.5, 0.0)).unwrap_or_default(), c(PI.sqrt(), 0.0))));
    check(
        &mut out,
        "log_gamma_conjugate_symmetry",
        1e-13,
        max_of(pts.iter().map(|&z| Ok((log_gamma(z.conj())? - log_gamma(z)?.conj()).norm()))),
    );
    check(
        &mut out,
        "log_gamma_duplication",
        1e-11,
        max_of(pts.iter().map(|&z| {
            let lhs = log_gamma(z * 2.0)?;
            let rhs = log_gamma(z)? + log_gamma(z + 0.5)? + (2.0 * z - 1.0) * 2f64.ln() - 0.5 * PI.ln();
            let d = lhs - rhs;
            // equal modulo 2πi
            Ok(c(d.re, d.im - 2.0 * PI * (d.im / (2.0 * PI)).round()).norm())
        })),
    );
    check(
        &mut out,
        "zeta_functional_equation_50",
        1e-9,
        max_of(strip_points(50).into_iter().map(|s| Ok(rel(completed_zeta(1.0 - s)?, completed_zeta(s)?)))),
    );
    check(
        &mut out,
        "zeta_at_2_and_4",
        1e-13,
        (|| {
            let a = rel(riemann_zeta(c(2.0, 0.0))?, c(PI * PI / 6.0, 0.0));
            let b = rel(riemann_zeta(c(4.0, 0.0))?, c(PI.powi(4) / 90.0, 0.0));
            Ok(a.max(b))
        })(),
    );
    check(
        &mut out,
        "zeta_at_one_half",
        1e-12,
        riemann_zeta(c(0.5, 0.0)).map(|z| (z - c(-1.460_354_508_809_586_8, 0.0)).norm()),
    );
    check(
        &mut out,
        "zeta_first_zero",
        1e-8,
        riemann_zeta(c(0.5, 14.134_725_141_734_694)).map(|z| z.norm()),
    );
    check(
        &mut out,
        "bessel_half_closed_form",
        1e-10,
        max_of([0.1, 1.0, 5.0, 20.0].into_iter().map(|x: f64| {
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            Ok(rel(bessel_k(c(0.5, 0.0), x)?, c(exact, 0.0)))
        })),
    );
    check(
        &mut out,
        "bessel_imaginary_order_real",
        1e-12,
        max_of([(13.78, 5.0), (9.53, 12.0), (3.0, 0.5), (40.0, 30.0)].into_iter().map(|(mu, x)| {
            let k = bessel_k(c(0.0, mu), x)?;
            Ok(k.im.abs() / k.norm())
        })),
    );
    check(
        &mut out,
        "bessel_recurrence",
        1e-10,
        max_of([(c(0.3, 2.0), 1.5), (c(0.0, 13.78), 8.0), (c(1.2, 0.0), 3.0)].into_iter().map(|(nu, x)| {
            let lhs = bessel_k(nu + 1.0, x)? - bessel_k(nu - 1.0, x)?;
            let rhs = bessel_k(nu, x)? * nu * (2.0 / x);
            Ok((lhs - rhs).norm() / bessel_k(nu + 1.0, x)?.norm())
        })),
    );
    out
}

fn domain_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    check(
        &mut out,
        "reduction_lands_in_domain",
        0.0,
        (|| {
            let mut bad = 0.0;
            for k in 0..200 {
                let x = -7.0 + 14.0 * (k as f64 * 0.618_033_988_749_895).fract();
                let y = 10f64.powf(-3.0 + 3.5 * (k as f64 * 0.414_213_562_373_095).fract());
                if !reduce(UpperHalfPoint::new(x, y)?).is_reduced() {
                    bad += 1.0;
                }
            }
            Ok(bad)
        })(),
    );
    check(
        &mut out,
        "fundamental_domain_volume",
        1e-6,
        fundamental_domain_volume(&DomainRule::default()).map(|v| (v - PI / 3.0).abs()),
    );
    check(
        &mut out,
        "eisenstein_inversion",
        1e-8,
        (|| {
            let z = UpperHalfPoint::new(0.2, 1.3)?;
            let s = c(0.7, 3.0);
            Ok(rel(eisenstein_value(s, z.act(0, -1, 1, 0), None)?, eisenstein_value(s, z, None)?))
        })(),
    );
    check(
        &mut out,
        "bessel_moment_closed_form",
        1e-7,
        (|| {
            let (mu, nu, s) = (13.78, c(-0.25, 0.5), c(2.0, 0.0));
            Ok(rel(bessel_moment(mu, nu, s)?.value, bessel_moment_closed(mu, nu, s)?))
        })(),
    );
    out
}

fn form_checks(form: &MaassForm, spec: &QuadratureSpec) -> Vec<CheckResult> {
    let label = form.label().to_string();
    let mut out = Vec::new();
    check(
        &mut out,
        format!("{label}/hecke_bound"),
        0.0,
        Ok(form
            .hecke_at_primes()
            .iter()
            .filter(|(&p, &v)| v.abs() > hecke_bound(p))
            .count() as f64),
    );
    check(&mut out, format!("{label}/hecke_relations"), 1e-9, hecke_residual(form));
    check(
        &mut out,
        format!("{label}/functional_equation"),
        1e-6,
        max_of(strip_points(12).into_iter().map(|s| {
            let s = c(s.re, s.im * 2.0);
            let a = completed_l_parts(form, s, spec)?;
            let b = completed_l_parts(form, 1.0 - s, spec)?;
            Ok(((b.ln() - a.ln()).exp() * root_number(form) - 1.0).norm())
        })),
    );
    check(
        &mut out,
        format!("{label}/dirichlet_vs_smoothed_afe"),
        1e-7,
        max_of([c(1.5, 10.0), c(2.0, -30.0), c(3.0, 0.0)].into_iter().map(|s| {
            Ok((l_dirichlet(form, s, spec)?.value - afe_smoothed(form, s, spec)?.value).norm())
        })),
    );
    check(
        &mut out,
        format!("{label}/dual_afe_within_error_bars"),
        1.0,
        max_of([(3u32, 40.0), (4, 75.0), (5, 120.0)].into_iter().map(|(n, t)| {
            let s = c(0.5, -(n as f64) * t);
            let paper = l_afe(form, s, t, spec)?;
            let smooth = afe_smoothed(form, s, spec)?;
            Ok((paper.value - smooth.value).norm() / (paper.err_estimate + smooth.err_estimate))
        })),
    );
    check(
        &mut out,
        format!("{label}/adjoint_normalization"),
        1e-12,
        (|| {
            let lam = completed_adjoint_l(form, c(1.0, 0.0))?;
            Ok((lam.value.re * form.rho1_squared()? - 8.0).abs())
        })(),
    );
    check(
        &mut out,
        format!("{label}/modular_invariance"),
        1e-6,
        (|| {
            let z = UpperHalfPoint::new(0.3, 0.9)?;
            Ok((maass_value(form, z, None)? - maass_value(form, reduce(z), None)?).abs())
        })(),
    );
    out
}

/// Largest `|λ(m)λ(k) - Σ_{d | (m,k)} λ(mk/d²)|` over small m, k.
fn hecke_residual(form: &MaassForm) -> Result<f64> {
    let lambda = form.coefficients(900, "hecke_residual")?;
    let mut worst = 0.0f64;
    for m in 1..=30usize {
        for k in 1..=30usize {
            let mut rhs = 0.0;
            for d in 1..=m.min(k) {
                if m % d == 0 && k % d == 0 {
                    rhs += lambda[m * k / (d * d)];
                }
            }
            worst = worst.max((lambda[m] * lambda[k] - rhs).abs());
        }
    }
    Ok(worst)
}

fn even_form_checks(form: &MaassForm, spec: &QuadratureSpec) -> Vec<CheckResult> {
    let label = form.label().to_string();
    let mut out = Vec::new();
    for n in [3u32, 4, 5] {
        check(
            &mut out,
            format!("{label}/unfolding_identity_n{n}"),
            1e-4,
            (|| {
                let s = c(2.0, 0.0);
                Ok(rel(i_series(form, n, 1.0, s, None)?.value, i_closed(form, n, 1.0, s, spec)?.value))
            })(),
        );
    }
    let a_n = c(0.8, -0.6);
    check(
        &mut out,
        format!("{label}/mu_dual_path"),
        1e-9,
        max_of((0..24).map(|k| {
            let n = 3 + (k % 3) as u32;
            let t = 5.0 + 37.0 * k as f64;
            Ok(rel(mu_gamma_form(form, n, t, a_n, spec)?.value, mu_completed(form, n, t, a_n, spec)?.value))
        })),
    );
    check(
        &mut out,
        format!("{label}/mu_squared_round_trip"),
        1e-9,
        max_of((0..12).map(|k| {
            let n = 3 + (k % 3) as u32;
            let t = 10.0 + 61.0 * k as f64;
            let direct = mu_completed(form, n, t, a_n, spec)?.value.norm_sqr();
            Ok((mu_squared(form, n, t, a_n, spec)? - direct).abs() / direct)
        })),
    );
    check(
        &mut out,
        format!("{label}/mu_conjugation"),
        1e-12,
        max_of([(3u32, 20.0), (4, 33.0)].into_iter().map(|(n, t)| {
            let plus = mu_completed(form, n, t, c(1.0, 0.0), spec)?.value;
            let minus = mu_completed(form, n, -t, c(1.0, 0.0), spec)?.value;
            Ok(rel(minus, plus.conj()))
        })),
    );
    check(
        &mut out,
        format!("{label}/mu_context_matches_direct"),
        1e-12,
        (|| {
            let ctx = MuContext::new(form, 3, a_n, spec)?;
            let t = 57.3;
            Ok(rel(ctx.mu(t)?.0, mu_completed(form, 3, t, a_n, spec)?.value))
        })(),
    );
    out
}

fn odd_form_checks(form: &MaassForm, forms: &[&MaassForm], spec: &QuadratureSpec) -> Vec<CheckResult> {
    let label = form.label().to_string();
    let a = c(1.0, 0.0);
    let zero = |v: Result<Complex64>| v.map(|z| if z == c(0.0, 0.0) { 0.0 } else { z.norm().max(f64::MIN_POSITIVE) });
    let mut out = Vec::new();
    check(&mut out, format!("{label}/mu_vanishes"), 0.0, zero(mu_completed(form, 3, 50.0, a, spec).map(|m| m.value)));
    check(&mut out, format!("{label}/mu_squared_vanishes"), 0.0, zero(mu_squared(form, 4, 50.0, a, spec).map(|v| c(v, 0.0))));
    check(&mut out, format!("{label}/prefactor_vanishes"), 0.0, zero(osc_prefactor(form, 3, a, spec)));
    check(&mut out, format!("{label}/mean_value_vanishes"), 0.0, zero(mean_value(form, 3, 20.0, a, spec).map(|r| r.integral)));
    check(
        &mut out,
        format!("{label}/variance_vanishes"),
        0.0,
        zero(weighted_variance(form, 3, 50.0, a, spec).map(|r| r.integral)),
    );
    if let Some(even) = forms.iter().find(|f| f.is_even()) {
        check(
            &mut out,
            format!("{label}/cross_variance_vanishes"),
            0.0,
            zero(cross_variance(even, form, 3, 50.0, a, spec).map(|r| r.integral)),
        );
    }
    out
}

fn stirling_checks(form: &MaassForm) -> Vec<CheckResult> {
    let label = form.label().to_string();
    let mut out = Vec::new();
    for n in [3u32, 4, 5] {
        check(
            &mut out,
            format!("{label}/stirling_envelope_n{n}"),
            1.0,
            max_of([50.0, 100.0, 200.0, 400.0].into_iter().map(|t| {
                let ratio = gamma_factor_sq(form, n, t)? / stirling_gamma_sq(n, t);
                Ok((ratio - 1.0).abs() * t / 5.0)
            })),
        );
    }
    out
}
