//! Integrals over dyadic windows `[T, 2T]` in t: the mean value of μ_{n,t}, the
//! oscillatory first moment, the second moment of `L(1/2 + it, φ)`, the
//! zeta-weighted quantum variance and its off-diagonal analogue.
//!
//! All integrals use composite Simpson on a uniform grid whose step resolves the
//! phase `n t log(nt/2eπ)`. A window is accepted when the Simpson values at steps
//! h and 2h agree to `spec.grid_rel_tol`; otherwise the step is halved, reusing
//! the existing samples. Samples are evaluated in parallel and summed in index order,
//! so results do not depend on the thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::lfun::{afe_smoothed, l_value};
use crate::maass::MaassForm;
use crate::quad::{simpson_weight, ComplexSum};
use crate::specfun::{log_gamma, riemann_zeta, QuadratureSpec};
use crate::wimu::MuContext;
use crate::{Error, Result};

/// Largest step used for the second moment.
pub const SECOND_MOMENT_MAX_STEP: f64 = 0.125;

/// `6/ζ(2)`-type constant `12/π²` in the second moment of `L(1/2 + it, φ)`.
pub const JUTILA_CONSTANT: f64 = 12.0 / (PI * PI);

/// Constant `C` in the tolerance `C |P| T^{-(n+1)/2} √log T` of the first-moment relation.
pub const RELATION_CONSTANT: f64 = 100.0;

const MAX_HALVINGS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentKind {
    MeanValue,
    OscFirstMoment,
    SecondMoment,
    WeightedVariance,
    CrossVariance,
}

impl MomentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::MeanValue => "mean_value",
            MomentKind::OscFirstMoment => "osc_first_moment",
            MomentKind::SecondMoment => "second_moment",
            MomentKind::WeightedVariance => "weighted_variance",
            MomentKind::CrossVariance => "cross_variance",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub kind: MomentKind,
    pub n: u32,
    /// Left end T of the window [T, 2T].
    pub t_window: f64,
    pub integral: Complex64,
    pub predicted: Option<Complex64>,
    pub ratio: Option<Complex64>,
    pub grid_step: f64,
    pub samples: usize,
    pub err_estimate: f64,
    /// Secondary quantities, e.g. alternative constants and correlations.
    pub diagnostics: Vec<(&'static str, f64)>,
}

impl MomentReport {
    fn new(kind: MomentKind, n: u32, t_window: f64, w: &WindowIntegral<1>, scale: f64) -> Self {
        Self {
            kind,
            n,
            t_window,
            integral: w.values[0] * scale,
            predicted: None,
            ratio: None,
            grid_step: w.grid_step,
            samples: w.samples,
            err_estimate: w.err_estimates[0] * scale.abs(),
            diagnostics: Vec::new(),
        }
    }

    fn with_prediction(mut self, predicted: Complex64) -> Self {
        self.predicted = Some(predicted);
        self.ratio = (predicted.norm() > 0.0).then(|| self.integral / predicted);
        self
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

/// Simpson integrals of K functions sampled on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowIntegral<const K: usize> {
    pub values: [Complex64; K],
    pub err_estimates: [f64; K],
    pub grid_step: f64,
    pub samples: usize,
}

type Sample<const K: usize> = ([Complex64; K], f64);

fn simpson<const K: usize>(samples: &[Sample<K>], stride: usize, h: f64) -> [Complex64; K] {
    let count = (samples.len() - 1) / stride + 1;
    let mut acc: [ComplexSum; K] = std::array::from_fn(|_| ComplexSum::new());
    for i in 0..count {
        let w = simpson_weight(i, count) * h;
        for (k, a) in acc.iter_mut().enumerate() {
            a.add(samples[i * stride].0[k] * w);
        }
    }
    std::array::from_fn(|k| acc[k].value())
}

/// Composite Simpson over [a, b] with step at most `max_step`, halved until the
/// step-h and step-2h values agree to `spec.grid_rel_tol` in every component.
/// `f(t)` returns the K integrand values and an absolute error bound for them.
pub fn integrate_window<const K: usize, F>(
    f: F,
    a: f64,
    b: f64,
    max_step: f64,
    spec: &QuadratureSpec,
    function: &'static str,
) -> Result<WindowIntegral<K>>
where
    F: Fn(f64) -> Result<Sample<K>> + Sync,
{
    if !(b > a) || !(max_step > 0.0) {
        return Err(Error::precondition(function, format!("bad window [{a}, {b}] or step {max_step}")));
    }
    let mut intervals = 4 * ((b - a) / (4.0 * max_step)).ceil().max(1.0) as usize;
    let eval = |indices: Vec<usize>, intervals: usize| -> Result<Vec<Sample<K>>> {
        let h = (b - a) / intervals as f64;
        indices.into_par_iter().map(|i| f(a + h * i as f64)).collect()
    };
    let mut samples = eval((0..=intervals).collect(), intervals)?;
    for halving in 0..=MAX_HALVINGS {
        let h = (b - a) / intervals as f64;
        let fine = simpson(&samples, 1, h);
        let coarse = simpson(&samples, 2, 2.0 * h);
        let converged = (0..K).all(|k| {
            (fine[k] - coarse[k]).norm() <= spec.grid_rel_tol * fine[k].norm() + spec.abs_tol
        });
        if converged {
            let mut err_estimates = [0.0; K];
            let count = samples.len();
            let sample_err: f64 = samples
                .iter()
                .enumerate()
                .map(|(i, s)| simpson_weight(i, count) * h * s.1)
                .sum();
            for k in 0..K {
                err_estimates[k] = (fine[k] - coarse[k]).norm() / 15.0 + sample_err;
            }
            return Ok(WindowIntegral {
                values: fine,
                err_estimates,
                grid_step: h,
                samples: samples.len(),
            });
        }
        if halving == MAX_HALVINGS {
            break;
        }
        if 2 * intervals + 1 > spec.max_samples {
            return Err(Error::Budget {
                function,
                detail: format!("{} samples needed on [{a}, {b}]", 2 * intervals + 1),
            });
        }
        let odd = eval((0..intervals).map(|i| 2 * i + 1).collect(), 2 * intervals)?;
        let mut merged = Vec::with_capacity(2 * intervals + 1);
        for (i, s) in samples.into_iter().enumerate() {
            merged.push(s);
            if i < intervals {
                merged.push(odd[i]);
            }
        }
        samples = merged;
        intervals *= 2;
    }
    Err(Error::Budget {
        function,
        detail: format!("grid on [{a}, {b}] not converged after {MAX_HALVINGS} halvings"),
    })
}

fn check_window(function: &'static str, n: u32, t_window: f64, min: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::precondition(function, format!("n = {n} below 3")));
    }
    if !(t_window >= min) {
        return Err(Error::precondition(function, format!("T = {t_window} below {min}")));
    }
    Ok(())
}

/// Step resolving the phase of μ_{n,t} on [T, 2T].
fn phase_step(n: u32, t_window: f64, spec: &QuadratureSpec) -> f64 {
    spec.grid_step
        .unwrap_or(spec.c_grid / (n as f64 * (2.0 * t_window).ln()))
}

fn single<F>(f: F) -> impl Fn(f64) -> Result<Sample<1>> + Sync
where
    F: Fn(f64) -> Result<(Complex64, f64)> + Sync,
{
    move |t| f(t).map(|(v, e)| ([v], e))
}

/// `(1/T) ∫_T^{2T} μ_{n,t} dt`, compared against the scale `T^{-(n-1)/2} √log T`.
pub fn mean_value(
    form: &MaassForm,
    n: u32,
    t_window: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<MomentReport> {
    check_window("mean_value", n, t_window, 20.0)?;
    let ctx = MuContext::new(form, n, a_n, spec)?;
    let w = integrate_window(
        single(|t| ctx.mu(t)),
        t_window,
        2.0 * t_window,
        phase_step(n, t_window, spec),
        spec,
        "mean_value",
    )?;
    let scale = t_window.powf(-(n as f64 - 1.0) / 2.0) * t_window.ln().sqrt();
    Ok(MomentReport::new(MomentKind::MeanValue, n, t_window, &w, 1.0 / t_window)
        .with_prediction(Complex64::new(scale, 0.0)))
}

/// The factor P with `μ_{n,t} ≈ P e^{-int log(nt/2eπ)} L(1/2 - int, φ) |ζ(n/2 + int)|^{-2} t^{-(n-1)/2}`:
/// `P = a_n ρ(1) (2/n)^{(n-1)/2} e^{iπ/4} |Γ((3-n)/4 + it_φ/2)|² L((3-n)/2, φ) / (4π^{2-n})`.
pub fn osc_prefactor(form: &MaassForm, n: u32, a_n: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !form.is_even() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let nf = n as f64;
    let special = l_value(form, Complex64::new((3.0 - nf) / 2.0, 0.0), spec)?;
    let gamma_sq = (2.0 * log_gamma(Complex64::new((3.0 - nf) / 4.0, form.spectral_param() / 2.0))?.re).exp();
    let modulus = form.rho1()? * (2.0 / nf).powf((nf - 1.0) / 2.0) * gamma_sq / (4.0 * PI.powf(2.0 - nf));
    Ok(a_n * special.value * Complex64::from_polar(modulus, PI / 4.0))
}

/// The oscillatory first moment
/// `𝓕(T) = ∫_T^{2T} e^{-int log(nt/2eπ)} L(1/2 - int, φ) |ζ(n/2 + int)|^{-2} t^{-(n-1)/2} dt`.
/// No main term is predicted; see [`osc_relation`].
pub fn osc_first_moment(form: &MaassForm, n: u32, t_window: f64, spec: &QuadratureSpec) -> Result<MomentReport> {
    check_window("osc_first_moment", n, t_window, 20.0)?;
    let w = integrate_window(
        single(|t| osc_integrand(form, n, t, spec)),
        t_window,
        2.0 * t_window,
        phase_step(n, t_window, spec),
        spec,
        "osc_first_moment",
    )?;
    Ok(MomentReport::new(MomentKind::OscFirstMoment, n, t_window, &w, 1.0))
}

/// The integrand of [`osc_first_moment`] and its error bound.
pub fn osc_integrand(form: &MaassForm, n: u32, t: f64, spec: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let nf = n as f64;
    let tau = nf * t;
    let phase = -tau * (tau / (2.0 * std::f64::consts::E * PI)).ln();
    let l = l_value(form, Complex64::new(0.5, -tau), spec)?;
    let zeta = riemann_zeta(Complex64::new(nf / 2.0, tau))?.norm_sqr();
    let scale = t.powf(-(nf - 1.0) / 2.0) / zeta;
    Ok((Complex64::from_polar(scale, phase) * l.value, scale * l.err_estimate))
}

/// Comparison of the mean value with its oscillatory-first-moment approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub mean: MomentReport,
    pub first_moment: MomentReport,
    pub prefactor: Complex64,
    /// `P 𝓕(T) / T`.
    pub approximation: Complex64,
    pub difference: f64,
    /// `C |P| T^{-(n+1)/2} √log T`.
    pub tolerance: f64,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.difference <= self.tolerance
    }
}

/// Checks `|mean_value - P 𝓕(T)/T| ≤ C |P| T^{-(n+1)/2} √log T` with `C = RELATION_CONSTANT`.
pub fn osc_relation(
    form: &MaassForm,
    n: u32,
    t_window: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<RelationCheck> {
    let mean = mean_value(form, n, t_window, a_n, spec)?;
    let first_moment = osc_first_moment(form, n, t_window, spec)?;
    let prefactor = osc_prefactor(form, n, a_n, spec)?;
    let approximation = prefactor * first_moment.integral / t_window;
    let tolerance = RELATION_CONSTANT
        * prefactor.norm()
        * t_window.powf(-(n as f64 + 1.0) / 2.0)
        * t_window.ln().sqrt();
    Ok(RelationCheck {
        difference: (mean.integral - approximation).norm(),
        mean,
        first_moment,
        prefactor,
        approximation,
        tolerance,
    })
}

/// `(12/π²) Λ(1, ad φ) cosh(π t_φ) T (log T + B)`.
pub fn jutila_prediction(form: &MaassForm, t_window: f64, b_fit: f64) -> Result<f64> {
    Ok(jutila_coefficient(form)? * t_window * (t_window.ln() + b_fit))
}

/// `(12/π²) Λ(1, ad φ) cosh(π t_φ)`, the coefficient of `T log T`.
pub fn jutila_coefficient(form: &MaassForm) -> Result<f64> {
    Ok(JUTILA_CONSTANT * form.completed_adjoint_at_1()? * (PI * form.spectral_param()).cosh())
}

/// `∫_T^{2T} |L(1/2 + it, φ)|² dt`, with [`jutila_prediction`] at B = 0 as the
/// predicted value.
pub fn second_moment(form: &MaassForm, t_window: f64, spec: &QuadratureSpec) -> Result<MomentReport> {
    if !(t_window >= 50.0) {
        return Err(Error::precondition("second_moment", format!("T = {t_window} below 50")));
    }
    let step = spec.grid_step.unwrap_or(SECOND_MOMENT_MAX_STEP).min(SECOND_MOMENT_MAX_STEP);
    let w = integrate_window(
        single(|t| {
            let l = afe_smoothed(form, Complex64::new(0.5, t), spec)?;
            Ok((
                Complex64::new(l.value.norm_sqr(), 0.0),
                2.0 * l.value.norm() * l.err_estimate + l.err_estimate.powi(2),
            ))
        }),
        t_window,
        2.0 * t_window,
        step,
        spec,
        "second_moment",
    )?;
    let predicted = jutila_prediction(form, t_window, 0.0)?;
    Ok(MomentReport::new(MomentKind::SecondMoment, 1, t_window, &w, 1.0)
        .with_prediction(Complex64::new(predicted, 0.0)))
}

/// Ordinary least squares `y = slope x + intercept` with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub points: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let m = xs.len();
    if m < 2 || ys.len() != m {
        return Err(Error::precondition("linear_fit", "need at least two (x, y) pairs"));
    }
    let mf = m as f64;
    let mx = xs.iter().sum::<f64>() / mf;
    let my = ys.iter().sum::<f64>() / mf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::precondition("linear_fit", "x values must not all coincide"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (slope_se, intercept_se) = if m > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        let s2 = rss / (mf - 2.0);
        ((s2 / sxx).sqrt(), (s2 * (1.0 / mf + mx * mx / sxx)).sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_se,
        intercept_se,
        points: m,
    })
}

/// Slope of `log |integral|` against `log T` over several windows.
pub fn loglog_slope(reports: &[MomentReport]) -> Result<LinearFit> {
    let xs: Vec<f64> = reports.iter().map(|r| r.t_window.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.integral.norm().ln()).collect();
    linear_fit(&xs, &ys)
}

/// Fit of `I(T)/T = c (log T + B)` over second-moment windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JutilaFit {
    pub coefficient: f64,
    pub coefficient_se: f64,
    pub b: f64,
    pub predicted_coefficient: f64,
}

impl JutilaFit {
    pub fn relative_deviation(&self) -> f64 {
        (self.coefficient / self.predicted_coefficient - 1.0).abs()
    }
}

pub fn fit_jutila(form: &MaassForm, reports: &[MomentReport]) -> Result<JutilaFit> {
    let xs: Vec<f64> = reports.iter().map(|r| r.t_window.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.integral.re / r.t_window).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(JutilaFit {
        coefficient: fit.slope,
        coefficient_se: fit.slope_se,
        b: fit.intercept / fit.slope,
        predicted_coefficient: jutila_coefficient(form)?,
    })
}

/// The main-term constants of the weighted variance in its two displayed forms:
/// `(6 log n/π²) |a_n|² (2π/n)^{n-1} cosh(πt_φ) Λ((3-n)/2, φ)²` and
/// `(12 log n/π) |a_n|² (2π/n)^{n-1} V_n(φ) L((3-n)/2, φ)²` with
/// `V_n(φ) = |Γ((3-n)/4 + it_φ/2)|⁴ / (2π^{3-n} |Γ(1/2 + it_φ)|²)`.
pub fn variance_constants(
    form: &MaassForm,
    n: u32,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !form.is_even() {
        return Ok((0.0, 0.0));
    }
    let nf = n as f64;
    let t_phi = form.spectral_param();
    let common = a_n.norm_sqr() * (2.0 * PI / nf).powf(nf - 1.0) * nf.ln();
    let ctx = MuContext::new(form, n, a_n, spec)?;
    let first = 6.0 / (PI * PI) * common * (PI * t_phi).cosh() * ctx.special_value().norm_sqr();

    let l = l_value(form, Complex64::new((3.0 - nf) / 2.0, 0.0), spec)?;
    let log_v = 4.0 * log_gamma(Complex64::new((3.0 - nf) / 4.0, t_phi / 2.0))?.re
        - (2.0 * PI.powf(3.0 - nf)).ln()
        - 2.0 * log_gamma(Complex64::new(0.5, t_phi))?.re;
    let second = 12.0 / PI * common * log_v.exp() * l.value.norm_sqr();
    Ok((first, second))
}

/// The weighted quantum variance
/// `(T^{n-2}/log T) ∫_T^{2T} |ζ(n/2 + int)|⁴ |μ_{n,t}|² dt`
/// against the `6 log n/π²` constant. The diagnostics carry the `V_n` form of the
/// constant and the constant with `log n` replaced by `(1 - 2^{2-n})/(n - 2)`, which is
/// what the second-moment asymptotic gives for the dyadic window. The unweighted
/// `(T^{n-2}/log T) ∫ |μ_{n,t}|² dt` from the same samples is reported as
/// `unweighted_variance`; its constant is left symbolic.
pub fn weighted_variance(
    form: &MaassForm,
    n: u32,
    t_window: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<MomentReport> {
    check_window("weighted_variance", n, t_window, 50.0)?;
    let ctx = MuContext::new(form, n, a_n, spec)?;
    let nf = n as f64;
    let w = integrate_window(
        |t| {
            let (v, e) = ctx.mu_squared_zeta_weighted(t)?;
            let zeta4 = riemann_zeta(Complex64::new(nf / 2.0, nf * t))?.norm_sqr().powi(2);
            Ok(([Complex64::new(v, 0.0), Complex64::new(v / zeta4, 0.0)], e * zeta4.recip().max(1.0)))
        },
        t_window,
        2.0 * t_window,
        phase_step(n, t_window, spec),
        spec,
        "weighted_variance",
    )?;
    let scale = t_window.powf(nf - 2.0) / t_window.ln();
    let unweighted = w.values[1].re * scale;
    let w = WindowIntegral {
        values: [w.values[0]],
        err_estimates: [w.err_estimates[0]],
        grid_step: w.grid_step,
        samples: w.samples,
    };
    let mut report = MomentReport::new(MomentKind::WeightedVariance, n, t_window, &w, scale);
    report.diagnostics.push(("unweighted_variance", unweighted));
    if !form.is_even() {
        return Ok(report);
    }
    let (first, second) = variance_constants(form, n, a_n, spec)?;
    let window_factor = (1.0 - 2f64.powf(2.0 - nf)) / (nf - 2.0);
    let corrected = first / nf.ln() * window_factor;
    let mut report = report.with_prediction(Complex64::new(first, 0.0));
    report.diagnostics.push(("predicted_v_form", second));
    report.diagnostics.push(("predicted_window_constant", corrected));
    report.diagnostics.push(("ratio_window_constant", report.integral.re / corrected));
    Ok(report)
}

/// The off-diagonal variance `(T^{n-2}/log T) ∫ |ζ(n/2 + int)|⁴ μ_φ conj(μ_ψ) dt`,
/// weighted as in [`weighted_variance`]. Diagnostics: both diagonal integrals and
/// the normalized correlation `|cross| / √(diag_φ diag_ψ)`.
pub fn cross_variance(
    phi: &MaassForm,
    psi: &MaassForm,
    n: u32,
    t_window: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<MomentReport> {
    check_window("cross_variance", n, t_window, 50.0)?;
    let ctx_phi = MuContext::new(phi, n, a_n, spec)?;
    let ctx_psi = MuContext::new(psi, n, a_n, spec)?;
    let w = integrate_window(
        |t| {
            let (a, ea) = ctx_phi.mu_zeta_weighted(t)?;
            let (b, eb) = ctx_psi.mu_zeta_weighted(t)?;
            let vals = [a * b.conj(), Complex64::new(a.norm_sqr(), 0.0), Complex64::new(b.norm_sqr(), 0.0)];
            Ok((vals, ea * b.norm() + eb * a.norm() + 2.0 * (ea * a.norm() + eb * b.norm())))
        },
        t_window,
        2.0 * t_window,
        phase_step(n, t_window, spec),
        spec,
        "cross_variance",
    )?;
    let scale = t_window.powf(n as f64 - 2.0) / t_window.ln();
    let cross = w.values[0] * scale;
    let diag_phi = w.values[1].re * scale;
    let diag_psi = w.values[2].re * scale;
    let denom = (diag_phi * diag_psi).sqrt();
    let correlation = if denom > 0.0 { cross.norm() / denom } else { 0.0 };
    Ok(MomentReport {
        kind: MomentKind::CrossVariance,
        n,
        t_window,
        integral: cross,
        predicted: None,
        ratio: None,
        grid_step: w.grid_step,
        samples: w.samples,
        err_estimate: w.err_estimates[0] * scale,
        diagnostics: vec![
            ("diag_phi", diag_phi),
            ("diag_psi", diag_psi),
            ("correlation", correlation),
        ],
    })
}
