//! The unfolded triple product
//!
//! `𝓘(s, φ) = ∫ φ(z) E(z, w) E(z, s) dμ`,  `w = 1 - n/4 + int/2`,  `ν = w - 1/2`,
//!
//! evaluated two ways: as the Dirichlet series
//! `(2ρ(1)/Λ(2w)) Σ_m λ(m) σ_{-2ν}(m) m^{ν-s} ∫_0^∞ K_{it_φ}(2πy) K_ν(2πy) y^s dy/y`
//! with the y-integral done numerically, and in closed form
//! `ρ(1)/(4π^{2s}) Π Γ((s ± it_φ ± ν)/2) L(s-ν, φ) L(s+ν, φ) / (Λ(2w) Λ(2s))`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::divisor_sigma;
use crate::lfun::{l_value, smooth_cutoff};
use crate::maass::MaassForm;
use crate::quad::{integrate_adaptive_multi, ComplexSum};
use crate::specfun::{bessel_k, completed_zeta, log_gamma, QuadratureSpec};
use crate::{Error, Result};

/// Smallest Bessel argument used by the numeric moment; the part of the integral
/// below it is charged to the error estimate.
const X_LOW: f64 = 1e-8;

/// A truncated series together with its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub err_estimate: f64,
    pub terms: u64,
}

/// `(w, ν)` with `w = 1 - n/4 + int/2` and `ν = w - 1/2`.
pub fn unfolding_params(n: u32, t: f64) -> (Complex64, Complex64) {
    let w = Complex64::new(1.0 - n as f64 / 4.0, n as f64 * t / 2.0);
    (w, w - 0.5)
}

fn check_convergent(function: &'static str, nu: Complex64, s: Complex64) -> Result<()> {
    if !(s.re > nu.re.abs()) {
        return Err(Error::Divergence {
            function,
            detail: format!("Re s = {} not above |Re ν| = {}", s.re, nu.re.abs()),
        });
    }
    Ok(())
}

/// `∫_0^∞ K_{iμ}(2πy) K_ν(2πy) y^s dy/y` by adaptive quadrature in log y.
pub fn bessel_moment(mu: f64, nu: Complex64, s: Complex64) -> Result<SeriesValue> {
    check_convergent("bessel_moment", nu, s)?;
    let order = Complex64::new(0.0, mu);
    let mut failure = None;
    let mut f = |u: f64| -> Complex64 {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let x = u.exp();
        let k = bessel_k(order, x).and_then(|a| Ok(a * bessel_k(nu, x)?));
        match k {
            Ok(k) => k * (s * (u - (2.0 * PI).ln())).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // x = 2πy; past x ≈ 60 + |orders| the product is below e^{-100}
    let u_lo = X_LOW.ln() + 1e-12;
    let u_hi = (60.0 + 0.5 * PI * (mu.abs() + nu.im.abs()) / 2.0).ln();
    let breaks: Vec<f64> = (0..=24).map(|k| u_lo + (u_hi - u_lo) * k as f64 / 24.0).collect();
    // for μ > 0 the moment is ~e^{-πμ} while the integrand is ~e^{-πμ/2}; the
    // attainable accuracy is relative to the integrand
    let scale = breaks
        .windows(2)
        .flat_map(|w| (0..8).map(move |k| w[0] + (w[1] - w[0]) * (k as f64 + 0.5) / 8.0))
        .map(|u| f(u).norm())
        .fold(0.0, f64::max);
    let abs_tol = 1e-15 * scale * (u_hi - u_lo);
    let r = integrate_adaptive_multi(&mut f, &breaks, 1e-12, abs_tol, 20_000)?;
    if let Some(e) = failure {
        return Err(e);
    }
    // below X_LOW the integrand is at most |K_{iμ}K_ν| x^{Re s} with K_ν ~ x^{-|Re ν|}
    let head = {
        let k = (bessel_k(order, X_LOW)? * bessel_k(nu, X_LOW)?).norm();
        let p = s.re;
        k * (X_LOW / (2.0 * PI)).powf(p) * (1.0 + X_LOW.ln().abs()) / (p - nu.re.abs())
    };
    Ok(SeriesValue {
        value: r.value,
        err_estimate: r.err + head,
        terms: r.evaluations as u64,
    })
}

/// `π^{-s} Π Γ((s ± iμ ± ν)/2) / (8 Γ(s))`, the closed form of [`bessel_moment`].
pub fn bessel_moment_closed(mu: f64, nu: Complex64, s: Complex64) -> Result<Complex64> {
    check_convergent("bessel_moment_closed", nu, s)?;
    Ok((gamma_quartet(mu, nu, s)? - s * PI.ln() - log_gamma(s)?).exp() / 8.0)
}

/// `log Π Γ((s ± iμ ± ν)/2)`.
fn gamma_quartet(mu: f64, nu: Complex64, s: Complex64) -> Result<Complex64> {
    let imu = Complex64::new(0.0, mu);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in [imu, -imu] {
        for b in [nu, -nu] {
            acc += log_gamma((s + a + b) * 0.5)?;
        }
    }
    Ok(acc)
}

fn check_unfolding(function: &'static str, form: &MaassForm, n: u32, s: Complex64) -> Result<()> {
    if !form.is_even() {
        return Err(Error::precondition(function, "defined for even forms only"));
    }
    if n < 3 {
        return Err(Error::precondition(function, format!("n = {n} below 3")));
    }
    if !(s.re >= 1.6) {
        return Err(Error::region(function, format!("Re s = {} below 1.6", s.re)));
    }
    Ok(())
}

/// `𝓘(s, φ)` as the unfolded Dirichlet series, smoothly cut off at `m_max` (or at the
/// end of the coefficient table). The error estimate is the change from `m_max/2`.
pub fn i_series(form: &MaassForm, n: u32, t: f64, s: Complex64, m_max: Option<u64>) -> Result<SeriesValue> {
    check_unfolding("i_series", form, n, s)?;
    let (w, nu) = unfolding_params(n, t);
    let m_max = m_max.unwrap_or_else(|| form.table_limit());
    if m_max < 4 {
        return Err(Error::precondition("i_series", "m_max below 4"));
    }
    let lambda = form.coefficients(m_max, "i_series")?;
    let sum_to = |cut: u64| {
        let mut acc = ComplexSum::new();
        for m in 1..cut {
            let l = lambda[m as usize];
            if l != 0.0 {
                let psi = smooth_cutoff(m as f64 / cut as f64);
                acc.add(divisor_sigma(m, -nu * 2.0) * ((nu - s) * (m as f64).ln()).exp() * (l * psi));
            }
        }
        acc.value()
    };
    let full = sum_to(m_max);
    let half = sum_to(m_max / 2);
    let j = bessel_moment(form.spectral_param(), nu, s)?;
    let pre = 2.0 * form.rho1()? / completed_zeta(w * 2.0)?;
    Ok(SeriesValue {
        value: pre * j.value * full,
        err_estimate: (pre * j.value * (full - half)).norm() + (pre * full).norm() * j.err_estimate,
        terms: m_max,
    })
}

/// `𝓘(s, φ)` from the Γ·L closed form.
pub fn i_closed(form: &MaassForm, n: u32, t: f64, s: Complex64, spec: &QuadratureSpec) -> Result<SeriesValue> {
    check_unfolding("i_closed", form, n, s)?;
    let (w, nu) = unfolding_params(n, t);
    let l1 = l_value(form, s - nu, spec)?;
    let l2 = l_value(form, s + nu, spec)?;
    let log_pre = gamma_quartet(form.spectral_param(), nu, s)? - s * (2.0 * PI.ln());
    let pre = (log_pre).exp() * form.rho1()? / 4.0 / (completed_zeta(w * 2.0)? * completed_zeta(s * 2.0)?);
    let value = pre * l1.value * l2.value;
    let err = pre.norm() * (l1.err_estimate * l2.value.norm() + l2.err_estimate * l1.value.norm());
    Ok(SeriesValue {
        value,
        err_estimate: err,
        terms: 0,
    })
}
