//! Approximate functional equation with truncated-contour weights
//!
//! `L(1/2 - iτ) ≈ Σ_{m ≤ T^{1+ε}} λ(m) m^{-1/2+iτ} W⁻(m)
//!               - i (τ/2eπ)^{2iτ} Σ_{m ≤ T^{1+ε}} λ(m) m^{-1/2-iτ} W⁺(m)`
//!
//! with `W^±(y) = (1/2πi) ∫_{ε-iT^ε}^{ε+iT^ε} (τ/2πy)^u e^{u^2 ± iπu/2} du/u` and τ = nt.
//! The root factor is the leading Stirling term of `ε gamma(1-s)/gamma(s)` for both
//! parities. For Re s = σ away from 1/2 the factor `(τ/2π)^{1-2σ}` is included.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{log_gamma_factor, root_number, LMethod, LValue};
use crate::maass::MaassForm;
use crate::quad::{integrate_adaptive, Chebyshev, ComplexSum};
use crate::specfun::{ln_int, QuadratureSpec};
use crate::{Error, Result};

/// Constant multiplying `T^{-1/2+ε}` in the charged truncation error.
pub const TRUNCATION_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightSign {
    Plus,
    Minus,
}

impl WeightSign {
    fn sign(self) -> f64 {
        match self {
            WeightSign::Plus => 1.0,
            WeightSign::Minus => -1.0,
        }
    }
}

/// `W^±` as a function of `x = ln(τ / 2πy)`, integrated over the truncated segment.
fn weight_at(x: f64, sign: WeightSign, eps: f64, half_len: f64) -> Result<Complex64> {
    let shift = Complex64::new(x, sign.sign() * 0.5 * PI);
    let f = |v: f64| {
        let u = Complex64::new(eps, v);
        (u * shift + u * u).exp() / u
    };
    let r = integrate_adaptive(f, -half_len, half_len, 1e-13, 1e-15, 4000)
        .or_else(|_| integrate_adaptive(f, -half_len, half_len, 1e-11, 1e-13, 20_000))?;
    Ok(r.value / (2.0 * PI))
}

/// `W_t^±(y)` for the height `tau = n t`, window scale `t_scale` and exponent `eps`.
pub fn afe_weight(tau: f64, y: f64, sign: WeightSign, t_scale: f64, eps: f64) -> Result<Complex64> {
    if !(tau >= 2.0) {
        return Err(Error::precondition("afe_weight", format!("height {tau} below 2")));
    }
    if !(y > 0.0) || !(t_scale > 1.0) || !(eps > 0.0) {
        return Err(Error::precondition(
            "afe_weight",
            format!("need y > 0, T > 1, eps > 0 (got {y}, {t_scale}, {eps})"),
        ));
    }
    weight_at((tau / (2.0 * PI * y)).ln(), sign, eps, t_scale.powf(eps))
}

/// Chebyshev model of `x -> W^±` on [lo, hi], refined until the trailing coefficients
/// are negligible.
fn weight_table(lo: f64, hi: f64, sign: WeightSign, eps: f64, half_len: f64) -> Result<Chebyshev> {
    let mut n = 48;
    loop {
        let values = (0..n)
            .map(|k| weight_at(Chebyshev::node(lo, hi, n, k), sign, eps, half_len))
            .collect::<Result<Vec<_>>>()?;
        let cheb = Chebyshev::from_values(lo, hi, &values);
        let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if cheb.tail() <= 1e-12 * scale || n >= 768 {
            return Ok(cheb);
        }
        n *= 2;
    }
}

/// Contour half-length beyond which the untruncated weight integrand is below e^{-120}.
const FULL_HALF_LEN: f64 = 12.0;

/// L(s, phi) near the critical line by the truncated-contour formula above, with
/// `t_scale` the window scale T setting the truncation `T^{1+ε}` and the contour
/// length `T^ε`. `ε` is `spec.afe_eps`.
///
/// The error estimate is `10 T^{-1/2+ε}` plus the distance to the same two-sum
/// formula with untruncated contours, the exact root factor `ε gamma(1-s)/gamma(s)`
/// and every tabulated coefficient, plus a mean-size bound for the terms beyond the
/// table. The leading-order root factor alone is off in phase by about `t_phi^2 / τ`.
pub fn l_afe(form: &MaassForm, s: Complex64, t_scale: f64, spec: &QuadratureSpec) -> Result<LValue> {
    if !(s.im.abs() >= 2.0) {
        return Err(Error::precondition("l_afe", format!("|Im s| = {} below 2", s.im.abs())));
    }
    if !(t_scale >= 2.0) {
        return Err(Error::precondition("l_afe", format!("window scale {t_scale} below 2")));
    }
    if s.im > 0.0 {
        let mut v = l_afe(form, s.conj(), t_scale, spec)?;
        v.value = v.value.conj();
        return Ok(v);
    }
    let eps = spec.afe_eps;
    let tau = -s.im;
    let sigma = s.re;
    let m_max = t_scale.powf(1.0 + eps).floor() as u64;
    let available = form.table_limit();
    if m_max > available {
        return Err(Error::InsufficientCoefficients {
            function: "l_afe",
            needed: m_max,
            available,
        });
    }
    let lambda = form.coefficients(available, "l_afe")?;
    let half_len = t_scale.powf(eps);
    let x_top = (tau / (2.0 * PI)).ln();
    let x_trunc = x_top - (m_max as f64).ln() - 1e-9;
    let x_table = x_top - (available as f64).ln() - 1e-9;
    let minus = weight_table(x_trunc, x_top, WeightSign::Minus, eps, half_len)?;
    let plus = weight_table(x_trunc, x_top, WeightSign::Plus, eps, half_len)?;
    let full_minus = weight_table(x_table, x_top, WeightSign::Minus, eps, FULL_HALF_LEN)?;
    let full_plus = weight_table(x_table, x_top, WeightSign::Plus, eps, FULL_HALF_LEN)?;

    let phase = 2.0 * tau * (tau / (2.0 * PI * std::f64::consts::E)).ln();
    let root = Complex64::new(0.0, -1.0)
        * Complex64::from_polar(1.0, phase)
        * (tau / (2.0 * PI)).powf(1.0 - 2.0 * sigma);

    let dual = 1.0 - s;
    let exact_root = (log_gamma_factor(form, dual)? - log_gamma_factor(form, s)?).exp()
        * root_number(form);
    let mut paper = ComplexSum::new();
    let mut reference = ComplexSum::new();
    let mut reference_dual = ComplexSum::new();
    for m in 1..=available {
        let l = lambda[m as usize];
        if l == 0.0 {
            continue;
        }
        let ln_m = ln_int(m as usize);
        let x = x_top - ln_m;
        let a = (-s * ln_m).exp() * l;
        let b = (-dual * ln_m).exp() * l;
        if m <= m_max {
            paper.add(a * minus.eval(x) + b * root * plus.eval(x));
        }
        reference.add(a * full_minus.eval(x));
        reference_dual.add(b * full_plus.eval(x));
    }
    let value = paper.value();
    let reference = reference.value() + exact_root * reference_dual.value();
    let beyond = table_tail_bound(x_top, x_table, sigma, root.norm(), eps)?;
    let err = TRUNCATION_CONSTANT * t_scale.powf(eps - 0.5) + (value - reference).norm() + beyond;
    Ok(LValue {
        value,
        err_estimate: err,
        method: LMethod::AfePaper,
    })
}

/// `∫_{y > Y} (y^{-σ} |W⁻| + |root| y^{σ-1} |W⁺|) dy` in the variable x = ln(τ/2πy),
/// with `x_table = ln(τ/2πY)`: the size of the untruncated sums beyond the table
/// when |λ| is replaced by its mean size 1.
fn table_tail_bound(x_top: f64, x_table: f64, sigma: f64, root: f64, eps: f64) -> Result<f64> {
    // y = e^{x_top - x}; with z = x_table - x ≥ 0, dy = y dz.
    let y0 = (x_top - x_table).exp();
    let mut total = 0.0;
    let mut z = 0.0;
    let dz = 0.05;
    loop {
        let x = x_table - z;
        let wm = weight_at(x, WeightSign::Minus, eps, FULL_HALF_LEN)?.norm();
        let wp = weight_at(x, WeightSign::Plus, eps, FULL_HALF_LEN)?.norm();
        let y = y0 * z.exp();
        let term = (y.powf(1.0 - sigma) * wm + root * y.powf(sigma) * wp) * dz;
        total += term;
        if (wm + wp) < 1e-14 || z > 40.0 {
            break;
        }
        z += dz;
    }
    Ok(total)
}
