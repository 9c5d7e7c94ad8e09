//! `L(s, ad phi) = ζ(2s) Σ λ(n^2) n^{-s}` with
//! `gamma_ad(s) = π^{-3s/2} Γ(s/2) Γ(s/2 + it) Γ(s/2 - it)` and root number +1.
//!
//! Values come from the degree-3 smoothed approximate functional equation
//! `L(s) = Σ b(n) n^{-s} V_1(n) + Σ b(n) n^{s-1} V_2(n)`, where
//! `b(n) = Σ_{d^2 | n} λ((n/d^2)^2)` and both weights are normalized by `gamma_ad(s)`,
//! so that s = 1 needs no special treatment of the pole of `gamma_ad` at 0.

use num_complex::Complex64;

use super::smoothed::Weight;
use super::{LMethod, LValue};
use crate::maass::MaassForm;
use crate::quad::ComplexSum;
use crate::specfun::{log_gamma, riemann_zeta, ln_int};
use crate::{Error, Result};

const WEIGHT_TOL: f64 = 1e-15;
const MAX_TERMS: u64 = 100_000;

/// `log gamma_ad(s)`.
pub fn adjoint_log_gamma_factor(t: f64, s: Complex64) -> Result<Complex64> {
    let ln_pi = std::f64::consts::PI.ln();
    let it = Complex64::new(0.0, t);
    Ok(-s * (1.5 * ln_pi)
        + log_gamma(s * 0.5)?
        + log_gamma(s * 0.5 + it)?
        + log_gamma(s * 0.5 - it)?)
}

fn tilt(t: f64, s: Complex64) -> f64 {
    let it = Complex64::new(0.0, t);
    -0.5 * ((s * 0.5).arg() + (s * 0.5 + it).arg() + (s * 0.5 - it).arg())
}

/// Log-scale centre of the weight built on `gamma_ad(w + u) / gamma_ad(w)`.
fn centre(t: f64, w: Complex64) -> f64 {
    let it = Complex64::new(0.0, t);
    let z = [w * 0.5, w * 0.5 + it, w * 0.5 - it];
    0.5 * z.iter().map(|z| z.norm().max(0.5).ln()).sum::<f64>() - 1.5 * std::f64::consts::PI.ln()
}

fn insufficient(form: &MaassForm, needed: u64) -> Error {
    Error::InsufficientCoefficients {
        function: "adjoint_l",
        needed,
        available: form.p_max(),
    }
}

/// λ(k^2) for k = 0..=k_max (entry 0 unused).
fn lambda_squares(form: &MaassForm, k_max: u64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; k_max as usize + 1];
    for k in 1..=k_max {
        out[k as usize] = form.hecke_lambda(k * k).map_err(|_| insufficient(form, k))?;
    }
    Ok(out)
}

fn adjoint_l_with(form: &MaassForm, s: Complex64, a: f64) -> Result<(Complex64, f64)> {
    let t = form.spectral_param();
    let c = 1.5 + (s.re - 0.5).abs();
    let base = adjoint_log_gamma_factor(t, s)?;
    let beta = tilt(t, s);
    let primal = Weight::build(
        |u| Ok(adjoint_log_gamma_factor(t, s + u)? - base),
        a,
        beta,
        c,
        WEIGHT_TOL,
        "adjoint_l",
    )?;
    let dual = Weight::build(
        |u| Ok(adjoint_log_gamma_factor(t, 1.0 - s + u)? - base),
        a,
        -beta,
        c,
        WEIGHT_TOL,
        "adjoint_l",
    )?;

    // the weights fall off like erfc((ln n - centre) / 2√a)
    let reach = 1.3 * 2.0 * a.sqrt() * (1e16f64).ln().sqrt();
    let last = (centre(t, s).max(centre(t, 1.0 - s)) + reach).exp().floor() as u64;
    if last > MAX_TERMS {
        return Err(Error::Budget {
            function: "adjoint_l",
            detail: format!("{last} terms needed at s = {s}"),
        });
    }
    let weights: Vec<Complex64> = (1..=last.max(1))
        .map(|n| {
            let xi = ln_int(n as usize);
            primal.eval(xi) * (-s * xi).exp() + dual.eval(xi) * ((s - 1.0) * xi).exp()
        })
        .collect();
    let n_max = weights.len() as u64;
    let squares = lambda_squares(form, n_max)?;
    let mut acc = ComplexSum::new();
    let mut mass = 0.0;
    for n in 1..=n_max {
        let mut b = 0.0;
        let mut d = 1;
        while d * d <= n {
            if n % (d * d) == 0 {
                b += squares[(n / (d * d)) as usize];
            }
            d += 1;
        }
        let term = weights[n as usize - 1] * b;
        mass += term.norm();
        acc.add(term);
    }
    Ok((acc.value(), mass))
}

/// L(s, ad phi) for Re s ≥ 1/2. The error estimate is the difference between two
/// Gaussian widths of the test function, which agree exactly in exact arithmetic.
pub fn adjoint_l(form: &MaassForm, s: Complex64) -> Result<LValue> {
    if !(s.re >= 0.5) {
        return Err(Error::precondition("adjoint_l", format!("Re s = {} below 1/2", s.re)));
    }
    let (v1, mass) = adjoint_l_with(form, s, 0.1)?;
    let (v2, _) = adjoint_l_with(form, s, 0.2)?;
    Ok(LValue {
        value: v1,
        err_estimate: (v1 - v2).norm() + 1e-15 * mass,
        method: LMethod::AfeSmoothed,
    })
}

/// Λ(s, ad phi) = gamma_ad(s) L(s, ad phi) for Re s ≥ 1.
pub fn completed_adjoint_l(form: &MaassForm, s: Complex64) -> Result<LValue> {
    if !(s.re >= 1.0) {
        return Err(Error::precondition(
            "completed_adjoint_l",
            format!("Re s = {} below 1", s.re),
        ));
    }
    let l = adjoint_l(form, s)?;
    let g = adjoint_log_gamma_factor(form.spectral_param(), s)?.exp();
    Ok(LValue {
        value: g * l.value,
        err_estimate: g.norm() * l.err_estimate,
        method: l.method,
    })
}

/// `ζ(2) Σ λ(n^2) n^{-1} e^{-n/x}`, a slowly converging approximation to L(1, ad phi)
/// kept as a diagnostic. The error estimate is the change from `x/2` to `x`.
pub fn adjoint_l_smoothed_series(form: &MaassForm, x: f64) -> Result<LValue> {
    if !(x >= 2.0) {
        return Err(Error::precondition("adjoint_l_smoothed_series", "x below 2"));
    }
    let n_max = (40.0 * x).ceil() as u64;
    let squares = lambda_squares(form, n_max)?;
    let series = |x: f64| -> f64 {
        let mut acc = crate::quad::CompensatedSum::new();
        for n in 1..=n_max {
            let nf = n as f64;
            acc.add(squares[n as usize] / nf * (-nf / x).exp());
        }
        acc.value()
    };
    let zeta2 = riemann_zeta(Complex64::new(2.0, 0.0))?.re;
    let full = zeta2 * series(x);
    let half = zeta2 * series(0.5 * x);
    Ok(LValue {
        value: Complex64::new(full, 0.0),
        err_estimate: (full - half).abs(),
        method: LMethod::DirichletSeries,
    })
}
