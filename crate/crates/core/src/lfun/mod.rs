//! L-functions attached to a Hecke–Maass form.
//!
//! `L(s, phi) = Σ λ(m) m^{-s}` is completed by
//! `gamma(s) = π^{-s} Γ((s + κ + it)/2) Γ((s + κ - it)/2)` with κ = 0 for even and
//! κ = 1 for odd forms, and `Λ(s) = gamma(s) L(s)` satisfies `Λ(s) = ε Λ(1 - s)` with
//! ε = +1 (even) or -1 (odd). The adjoint L-function lives in [`adjoint`].

mod adjoint;
mod paper;
mod smoothed;

pub use adjoint::{
    adjoint_l, adjoint_l_smoothed_series, adjoint_log_gamma_factor, completed_adjoint_l,
};
pub use paper::{afe_weight, l_afe, WeightSign};
pub use smoothed::afe_smoothed;

use num_complex::Complex64;

use crate::maass::MaassForm;
use crate::quad::ComplexSum;
use crate::specfun::{log_gamma, QuadratureSpec};
use crate::{Error, Result};

/// Smallest real part accepted by [`l_dirichlet`].
pub const DIRICHLET_MIN_RE: f64 = 1.2;

/// Real parts at or below this value are reflected through the functional equation.
pub const REFLECT_MAX_RE: f64 = -0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LMethod {
    DirichletSeries,
    AfePaper,
    AfeSmoothed,
    FunctionalEquation,
}

impl LMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LMethod::DirichletSeries => "dirichlet_series",
            LMethod::AfePaper => "afe_paper",
            LMethod::AfeSmoothed => "afe_smoothed",
            LMethod::FunctionalEquation => "functional_equation",
        }
    }
}

/// An L-value with an error estimate and the method that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValue {
    pub value: Complex64,
    pub err_estimate: f64,
    pub method: LMethod,
}

/// `log gamma(s)`, with κ = 0 or 1 and spectral parameter `t`.
pub(crate) fn log_gamma_factor_raw(kappa: f64, t: f64, s: Complex64) -> Result<Complex64> {
    let ln_pi = std::f64::consts::PI.ln();
    let it = Complex64::new(0.0, t);
    Ok(-s * ln_pi + log_gamma((s + kappa + it) * 0.5)? + log_gamma((s + kappa - it) * 0.5)?)
}

pub(crate) fn kappa(form: &MaassForm) -> f64 {
    if form.is_even() {
        0.0
    } else {
        1.0
    }
}

/// Root number ε in `Λ(s) = ε Λ(1 - s)`.
pub fn root_number(form: &MaassForm) -> f64 {
    if form.is_even() {
        1.0
    } else {
        -1.0
    }
}

/// `log gamma(s)` for the archimedean factor of `L(s, phi)`.
pub fn log_gamma_factor(form: &MaassForm, s: Complex64) -> Result<Complex64> {
    log_gamma_factor_raw(kappa(form), form.spectral_param(), s)
}

/// Smooth cutoff: 1 on [0, 1/2], 0 on [1, ∞), C^∞ in between.
pub(crate) fn smooth_cutoff(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let bump = |u: f64| (-1.0 / u).exp();
    let a = bump(1.0 - x);
    let b = bump(x - 0.5);
    a / (a + b)
}

/// Σ λ(m) m^{-s} ψ(m/M) for Re s ≥ 1.2, with M the largest tabulated index (capped
/// by `spec.series_cap`). The error estimate compares against the sum with cutoff M/2.
pub fn l_dirichlet(form: &MaassForm, s: Complex64, spec: &QuadratureSpec) -> Result<LValue> {
    if !(s.re >= DIRICHLET_MIN_RE) {
        return Err(Error::region(
            "l_dirichlet",
            format!("Re s = {} below {DIRICHLET_MIN_RE}", s.re),
        ));
    }
    let limit = form.table_limit().min(spec.series_cap as u64);
    if limit < 16 {
        return Err(Error::InsufficientCoefficients {
            function: "l_dirichlet",
            needed: 16,
            available: limit,
        });
    }
    let lambda = form.coefficients(limit, "l_dirichlet")?;
    let smoothed = |cap: u64| -> (Complex64, f64) {
        let mut acc = ComplexSum::new();
        let mut mass = 0.0;
        for m in 1..cap {
            let w = smooth_cutoff(m as f64 / cap as f64);
            if w == 0.0 {
                break;
            }
            let term = (-s * crate::specfun::ln_int(m as usize)).exp() * (lambda[m as usize] * w);
            mass += term.norm();
            acc.add(term);
        }
        (acc.value(), mass)
    };
    let (full, mass) = smoothed(limit);
    let (half, _) = smoothed(limit / 2);
    Ok(LValue {
        value: full,
        err_estimate: (full - half).norm() + 1e-15 * mass,
        method: LMethod::DirichletSeries,
    })
}

/// L(s, phi) with the method chosen from Re s: the Dirichlet series for Re s ≥ 1.2,
/// the functional equation for Re s ≤ -0.2, and [`afe_smoothed`] in between.
pub fn l_value(form: &MaassForm, s: Complex64, spec: &QuadratureSpec) -> Result<LValue> {
    if s.re >= DIRICHLET_MIN_RE {
        return l_dirichlet(form, s, spec);
    }
    if s.re <= REFLECT_MAX_RE {
        let dual = l_dirichlet(form, 1.0 - s, spec)?;
        let ratio = (log_gamma_factor(form, 1.0 - s)? - log_gamma_factor(form, s)?).exp()
            * root_number(form);
        return Ok(LValue {
            value: ratio * dual.value,
            err_estimate: ratio.norm() * dual.err_estimate,
            method: LMethod::FunctionalEquation,
        });
    }
    afe_smoothed(form, s, spec)
}

/// Λ(s, phi) split as `exp(log_gamma) * l.value`, for use where Λ itself under- or
/// overflows. For Re s ≤ -0.2 the split is `gamma(1 - s)` times `ε L(1 - s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedParts {
    pub log_gamma: Complex64,
    pub l: LValue,
}

impl CompletedParts {
    pub fn value(&self) -> Complex64 {
        self.log_gamma.exp() * self.l.value
    }

    /// log Λ; the imaginary part is defined modulo 2π.
    pub fn ln(&self) -> Complex64 {
        self.log_gamma + self.l.value.ln()
    }
}

pub fn completed_l_parts(
    form: &MaassForm,
    s: Complex64,
    spec: &QuadratureSpec,
) -> Result<CompletedParts> {
    if s.re <= REFLECT_MAX_RE {
        let dual = l_dirichlet(form, 1.0 - s, spec)?;
        return Ok(CompletedParts {
            log_gamma: log_gamma_factor(form, 1.0 - s)?,
            l: LValue {
                value: dual.value * root_number(form),
                err_estimate: dual.err_estimate,
                method: LMethod::FunctionalEquation,
            },
        });
    }
    Ok(CompletedParts {
        log_gamma: log_gamma_factor(form, s)?,
        l: l_value(form, s, spec)?,
    })
}

/// Λ(s, phi) = gamma(s) L(s, phi); see [`l_value`] for the method dispatch.
pub fn completed_l(form: &MaassForm, s: Complex64, spec: &QuadratureSpec) -> Result<LValue> {
    let parts = completed_l_parts(form, s, spec)?;
    let scale = parts.log_gamma.exp();
    Ok(LValue {
        value: scale * parts.l.value,
        err_estimate: scale.norm() * parts.l.err_estimate,
        method: parts.l.method,
    })
}

#[cfg(test)]
mod tests;
