//! Closed formulas for the inner product μ_{n,t} of a Maass form against the
//! restricted minimal-parabolic Eisenstein series.
//!
//! Two assemblies of the same quantity are provided: from completed L-functions,
//! `μ = (a_n ρ(1)/4) Λ(1/2 - int, φ) Λ((3-n)/2, φ) / |Λ(n/2 + int)|²`,
//! and from raw gamma and L factors,
//! `μ = a_n ρ(1)/(4π^{2-n/2-int}) |Γ((3-n)/4 + it_φ/2)|² Γ(1/4 + i(t_φ-nt)/2)
//!      Γ(1/4 - i(t_φ+nt)/2) L(1/2 - int, φ) L((3-n)/2, φ) / |Λ(n/2 + int)|²`.
//! Both vanish for odd forms. The Γ factors decay like `e^{-πnt/2}` and cancel
//! against `|Λ(n/2 + int)|²`, so everything is assembled in log space.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::lfun::{completed_l_parts, l_value, LValue};
use crate::maass::MaassForm;
use crate::specfun::{log_completed_zeta, log_gamma, riemann_zeta, QuadratureSpec};
use crate::{Error, Result};

/// Smallest |t| accepted; below it the central value is not in the regime the
/// formulas are used for.
pub const MIN_T: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuEvaluation {
    pub n: u32,
    pub t: f64,
    pub a_n: Complex64,
    /// μ_{n,t}.
    pub value: Complex64,
    /// `𝒢_{n,φ}(t) = Γ(1/4 + i(t_φ-nt)/2) Γ(1/4 - i(t_φ+nt)/2) / |Γ(n/4 + int/2)|²`.
    pub gamma_factor: Complex64,
    /// L(1/2 - int, φ).
    pub l_central: Complex64,
    /// L((3-n)/2, φ).
    pub l_special: Complex64,
    /// ζ(n/2 + int); its gamma factor is carried by `gamma_factor`.
    pub zeta_denom: Complex64,
    pub err_estimate: f64,
}

impl MuEvaluation {
    fn zero(n: u32, t: f64, a_n: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            n,
            t,
            a_n,
            value: z,
            gamma_factor: z,
            l_central: z,
            l_special: z,
            zeta_denom: z,
            err_estimate: 0.0,
        }
    }
}

fn check(function: &'static str, n: u32, t: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::precondition(function, format!("n = {n} below 3")));
    }
    if !(t.abs() >= MIN_T) {
        return Err(Error::precondition(function, format!("|t| = {} below {MIN_T}", t.abs())));
    }
    Ok(())
}

/// `(1/2 - int, (3-n)/2, n/2 + int)`.
fn arguments(n: u32, t: f64) -> (Complex64, Complex64, Complex64) {
    let nf = n as f64;
    (
        Complex64::new(0.5, -nf * t),
        Complex64::new((3.0 - nf) / 2.0, 0.0),
        Complex64::new(nf / 2.0, nf * t),
    )
}

/// `log 𝒢_{n,φ}(t)`.
fn log_gamma_factor(t_phi: f64, n: u32, t: f64) -> Result<Complex64> {
    let nf = n as f64;
    let num = log_gamma(Complex64::new(0.25, (t_phi - nf * t) / 2.0))?
        + log_gamma(Complex64::new(0.25, -(t_phi + nf * t) / 2.0))?;
    let den = 2.0 * log_gamma(Complex64::new(nf / 4.0, nf * t / 2.0))?.re;
    Ok(num - den)
}

fn relative_err(l: &LValue) -> f64 {
    l.err_estimate / l.value.norm()
}

/// μ_{n,t} from completed L-functions.
pub fn mu_completed(
    form: &MaassForm,
    n: u32,
    t: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<MuEvaluation> {
    check("mu_completed", n, t)?;
    if !form.is_even() {
        return Ok(MuEvaluation::zero(n, t, a_n));
    }
    let (s_central, s_special, s_zeta) = arguments(n, t);
    let central = completed_l_parts(form, s_central, spec)?;
    let special = completed_l_parts(form, s_special, spec)?;
    let log_zeta = log_completed_zeta(s_zeta)?;
    let log_value = central.log_gamma + special.log_gamma - 2.0 * log_zeta.re;
    let value = log_value.exp() * central.l.value * special.l.value * a_n * (form.rho1()? / 4.0);
    let rho_rel = form.adjoint_l_at_1()?.err_estimate / form.adjoint_l_at_1()?.value.norm();
    let err = value.norm() * (relative_err(&central.l) + relative_err(&special.l) + 0.5 * rho_rel);
    Ok(MuEvaluation {
        n,
        t,
        a_n,
        value,
        gamma_factor: log_gamma_factor(form.spectral_param(), n, t)?.exp(),
        l_central: central.l.value,
        l_special: special.l.value,
        zeta_denom: riemann_zeta(s_zeta)?,
        err_estimate: err,
    })
}

/// μ_{n,t} from the raw gamma and L factors.
pub fn mu_gamma_form(
    form: &MaassForm,
    n: u32,
    t: f64,
    a_n: Complex64,
    spec: &QuadratureSpec,
) -> Result<MuEvaluation> {
    check("mu_gamma_form", n, t)?;
    if !form.is_even() {
        return Ok(MuEvaluation::zero(n, t, a_n));
    }
    let nf = n as f64;
    let t_phi = form.spectral_param();
    let (s_central, s_special, s_zeta) = arguments(n, t);
    let central = l_value(form, s_central, spec)?;
    let special = l_value(form, s_special, spec)?;
    let zeta = riemann_zeta(s_zeta)?;

    let ln_pi = PI.ln();
    let special_gamma = 2.0 * log_gamma(Complex64::new((3.0 - nf) / 4.0, t_phi / 2.0))?.re;
    let central_gamma = log_gamma(Complex64::new(0.25, (t_phi - nf * t) / 2.0))?
        + log_gamma(Complex64::new(0.25, -(t_phi + nf * t) / 2.0))?;
    // |Λ(n/2 + int)|² = π^{-n/2} |Γ(n/4 + int/2)|² |ζ(n/2 + int)|²
    let zeta_gamma = -0.5 * nf * ln_pi + 2.0 * log_gamma(Complex64::new(nf / 4.0, nf * t / 2.0))?.re;
    let log_pi_power = -Complex64::new(2.0 - nf / 2.0, -nf * t) * ln_pi;
    let log_value = log_pi_power + special_gamma + central_gamma - zeta_gamma;
    let value =
        log_value.exp() * central.value * special.value / zeta.norm_sqr() * a_n * (form.rho1()? / 4.0);
    let rho_rel = form.adjoint_l_at_1()?.err_estimate / form.adjoint_l_at_1()?.value.norm();
    let err = value.norm() * (relative_err(&central) + relative_err(&special) + 0.5 * rho_rel);
    Ok(MuEvaluation {
        n,
        t,
        a_n,
        value,
        gamma_factor: log_gamma_factor(t_phi, n, t)?.exp(),
        l_central: central.value,
        l_special: special.value,
        zeta_denom: zeta,
        err_estimate: err,
    })
}

/// |μ_{n,t}|² through Λ(1, ad φ) in place of |ρ(1)|²:
/// `(|a_n|²/2) |Λ(1/2 - int, φ)|² Λ((3-n)/2, φ)² / (|Λ(n/2 + int)|⁴ Λ(1, ad φ))`.
pub fn mu_squared(form: &MaassForm, n: u32, t: f64, a_n: Complex64, spec: &QuadratureSpec) -> Result<f64> {
    check("mu_squared", n, t)?;
    if !form.is_even() {
        return Ok(0.0);
    }
    let (s_central, s_special, s_zeta) = arguments(n, t);
    let central = completed_l_parts(form, s_central, spec)?;
    let special = completed_l_parts(form, s_special, spec)?;
    let log_zeta = log_completed_zeta(s_zeta)?.re;
    let log_mod = 2.0 * central.log_gamma.re + 2.0 * special.log_gamma.re - 4.0 * log_zeta;
    Ok(0.5 * a_n.norm_sqr() * log_mod.exp() * central.l.value.norm_sqr() * special.l.value.norm_sqr()
        / form.completed_adjoint_at_1()?)
}

/// `|𝒢_{n,φ}(t)|²`, the exact gamma quotient.
pub fn gamma_factor_sq(form: &MaassForm, n: u32, t: f64) -> Result<f64> {
    if n < 3 || !(t > 0.0) {
        return Err(Error::precondition("gamma_factor_sq", format!("need n ≥ 3, t > 0 (got {n}, {t})")));
    }
    Ok((2.0 * log_gamma_factor(form.spectral_param(), n, t)?.re).exp())
}

/// `(2/(nt))^{n-1}`, the leading Stirling term of [`gamma_factor_sq`].
pub fn stirling_gamma_sq(n: u32, t: f64) -> f64 {
    (2.0 / (n as f64 * t)).powi(n as i32 - 1)
}

/// The t-independent factors of μ_{n,t} for one form, cached for evaluation on t-grids.
///
/// The `*_zeta_weighted` variants carry the extra factor `|ζ(n/2 + int)|²` per power
/// of μ, which cancels the zeta function from the denominator.
pub struct MuContext<'a> {
    form: &'a MaassForm,
    n: u32,
    a_n: Complex64,
    spec: QuadratureSpec,
    even: bool,
    rho1: f64,
    completed_adjoint: f64,
    special_log_gamma: Complex64,
    special: LValue,
}

impl<'a> MuContext<'a> {
    pub fn new(form: &'a MaassForm, n: u32, a_n: Complex64, spec: &QuadratureSpec) -> Result<Self> {
        if n < 3 {
            return Err(Error::precondition("MuContext", format!("n = {n} below 3")));
        }
        let even = form.is_even();
        let (rho1, completed_adjoint, special_log_gamma, special) = if even {
            let (_, s_special, _) = arguments(n, 0.0);
            let parts = completed_l_parts(form, s_special, spec)?;
            (form.rho1()?, form.completed_adjoint_at_1()?, parts.log_gamma, parts.l)
        } else {
            let zero = LValue {
                value: Complex64::new(0.0, 0.0),
                err_estimate: 0.0,
                method: crate::lfun::LMethod::DirichletSeries,
            };
            (0.0, 0.0, Complex64::new(0.0, 0.0), zero)
        };
        Ok(Self {
            form,
            n,
            a_n,
            spec: *spec,
            even,
            rho1,
            completed_adjoint,
            special_log_gamma,
            special,
        })
    }

    pub fn form(&self) -> &MaassForm {
        self.form
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a_n(&self) -> Complex64 {
        self.a_n
    }

    /// Λ((3-n)/2, φ).
    pub fn special_value(&self) -> Complex64 {
        self.special_log_gamma.exp() * self.special.value
    }

    /// `log Λ(1/2 - int, φ)` split as (gamma part, L-value), and `log |π^{-s/2}Γ(s/2)|` at
    /// `s = n/2 + int`.
    fn central(&self, t: f64) -> Result<(Complex64, LValue, f64)> {
        check("MuContext", self.n, t)?;
        let (s_central, _, s_zeta) = arguments(self.n, t);
        let central = completed_l_parts(self.form, s_central, &self.spec)?;
        let zeta_gamma = (-s_zeta * 0.5 * PI.ln() + log_gamma(s_zeta * 0.5)?).re;
        Ok((central.log_gamma, central.l, zeta_gamma))
    }

    /// `(μ_{n,t} |ζ(n/2 + int)|², error estimate)`.
    pub fn mu_zeta_weighted(&self, t: f64) -> Result<(Complex64, f64)> {
        if !self.even {
            check("MuContext", self.n, t)?;
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let (log_gamma, l, zeta_gamma) = self.central(t)?;
        let value = (log_gamma + self.special_log_gamma - 2.0 * zeta_gamma).exp()
            * l.value
            * self.special.value
            * self.a_n
            * (self.rho1 / 4.0);
        let err = value.norm() * (relative_err(&l) + relative_err(&self.special));
        Ok((value, err))
    }

    /// `(μ_{n,t}, error estimate)`.
    pub fn mu(&self, t: f64) -> Result<(Complex64, f64)> {
        let (v, e) = self.mu_zeta_weighted(t)?;
        if !self.even {
            return Ok((v, e));
        }
        let (_, _, s_zeta) = arguments(self.n, t);
        let z2 = riemann_zeta(s_zeta)?.norm_sqr();
        Ok((v / z2, e / z2))
    }

    /// `(|ζ(n/2 + int)|⁴ |μ_{n,t}|², error estimate)` through Λ(1, ad φ), as in [`mu_squared`].
    pub fn mu_squared_zeta_weighted(&self, t: f64) -> Result<(f64, f64)> {
        if !self.even {
            check("MuContext", self.n, t)?;
            return Ok((0.0, 0.0));
        }
        let (log_gamma, l, zeta_gamma) = self.central(t)?;
        let log_mod = 2.0 * log_gamma.re + 2.0 * self.special_log_gamma.re - 4.0 * zeta_gamma;
        let value = 0.5 * self.a_n.norm_sqr() * log_mod.exp() * l.value.norm_sqr()
            * self.special.value.norm_sqr()
            / self.completed_adjoint;
        let err = value * 2.0 * (relative_err(&l) + relative_err(&self.special));
        Ok((value, err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn odd_forms_vanish_everywhere() {
        let spec = QuadratureSpec::default();
        let odd = testdata::odd();
        for (n, t) in [(3, 5.0), (4, 50.0), (5, -20.0)] {
            let a = c(1.3, -0.2);
            for m in [mu_completed(odd, n, t, a, &spec).unwrap(), mu_gamma_form(odd, n, t, a, &spec).unwrap()] {
                assert_eq!(m.value, c(0.0, 0.0));
                assert_eq!(m.l_central, c(0.0, 0.0));
                assert_eq!(m.err_estimate, 0.0);
            }
            assert_eq!(mu_squared(odd, n, t, a, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn completed_and_gamma_forms_agree() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        let m1 = mu_completed(even, 3, 50.0, c(1.0, 0.0), &spec).unwrap();
        let m2 = mu_gamma_form(even, 3, 50.0, c(1.0, 0.0), &spec).unwrap();
        assert!(rel(m1.value, m2.value) < 1e-9, "{} vs {}", m1.value, m2.value);
        // a deterministic sweep over n and t
        let mut x = 0.37f64;
        for k in 0..50 {
            x = (x * 7.13 + 0.291).fract();
            let n = 3 + (k % 4) as u32;
            let t = 10.0 + 490.0 * x;
            let m1 = mu_completed(even, n, t, c(1.0, 0.0), &spec).unwrap();
            let m2 = mu_gamma_form(even, n, t, c(1.0, 0.0), &spec).unwrap();
            assert!(rel(m1.value, m2.value) < 1e-9, "n {n} t {t}: {} vs {}", m1.value, m2.value);
        }
    }

    #[test]
    fn linear_in_a_n_and_conjugate_in_t() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        let one = mu_completed(even, 4, 30.0, c(1.0, 0.0), &spec).unwrap();
        let two = mu_completed(even, 4, 30.0, c(2.0, 0.0), &spec).unwrap();
        assert_eq!(two.value, one.value * 2.0);
        let minus = mu_completed(even, 4, -30.0, c(1.0, 0.0), &spec).unwrap();
        assert!(rel(minus.value, one.value.conj()) < 1e-10);
    }

    #[test]
    fn squared_form_round_trip() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        let mut x = 0.81f64;
        for k in 0..20 {
            x = (x * 5.77 + 0.113).fract();
            let n = 3 + (k % 3) as u32;
            let t = 5.0 + 200.0 * x;
            let a = c(0.5 + x, 1.0 - x);
            let m = mu_completed(even, n, t, a, &spec).unwrap();
            let sq = mu_squared(even, n, t, a, &spec).unwrap();
            assert!(sq >= 0.0);
            assert!((sq - m.value.norm_sqr()).abs() < 1e-9 * sq, "n {n} t {t}");
        }
    }

    #[test]
    fn n3_special_gamma_factor_is_finite() {
        let even = testdata::even();
        let g = log_gamma(c(0.0, even.spectral_param() / 2.0)).unwrap();
        assert!(g.re.is_finite());
        let direct = crate::specfun::gamma(c(0.0, even.spectral_param() / 2.0)).unwrap();
        assert!((g.re.exp() - direct.norm()).abs() < 1e-12 * direct.norm());
    }

    #[test]
    fn stirling_approximation() {
        let even = testdata::even();
        for t in [100.0, 150.0, 200.0, 400.0] {
            let exact = gamma_factor_sq(even, 3, t).unwrap();
            assert!(exact > 0.0);
            assert!((exact / stirling_gamma_sq(3, t) - 1.0).abs() <= 5.0 / t, "t {t}");
        }
        let err = |t: f64| (gamma_factor_sq(even, 3, t).unwrap() / stirling_gamma_sq(3, t) - 1.0).abs();
        assert!(err(100.0) >= 1.5 * err(200.0));
    }

    #[test]
    fn glh_scale_envelope_has_no_blow_up() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        let n = 3;
        let scaled: Vec<f64> = (0..40)
            .map(|k| {
                let t = 10.0 * 1.1f64.powi(k);
                let m = mu_completed(even, n, t, c(1.0, 0.0), &spec).unwrap();
                m.value.norm() * t.powf((n as f64 - 1.0) / 2.0) / t.ln().powi(2)
            })
            .collect();
        let max = scaled.iter().cloned().fold(0.0, f64::max);
        let first = scaled[..5].iter().cloned().fold(0.0, f64::max);
        assert!(max <= 100.0 * first.max(1e-300), "{scaled:?}");
    }

    #[test]
    fn contracts() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        assert!(mu_completed(even, 2, 10.0, c(1.0, 0.0), &spec).is_err());
        assert!(mu_completed(even, 3, 1.0, c(1.0, 0.0), &spec).is_err());
        assert!(gamma_factor_sq(even, 3, 0.0).is_err());
    }

    #[test]
    fn context_matches_direct_formulas() {
        let spec = QuadratureSpec::default();
        let even = testdata::even();
        let a = c(0.7, 0.4);
        for n in [3, 4, 6] {
            let ctx = MuContext::new(even, n, a, &spec).unwrap();
            for t in [3.0, 40.0, 250.0] {
                let direct = mu_completed(even, n, t, a, &spec).unwrap();
                let (v, _) = ctx.mu(t).unwrap();
                assert!(rel(v, direct.value) < 1e-12);
                let z4 = direct.zeta_denom.norm_sqr().powi(2);
                let (w, _) = ctx.mu_squared_zeta_weighted(t).unwrap();
                let sq = mu_squared(even, n, t, a, &spec).unwrap();
                assert!((w - sq * z4).abs() < 1e-9 * w);
            }
        }
        let odd = MuContext::new(testdata::odd(), 3, a, &spec).unwrap();
        assert_eq!(odd.mu(10.0).unwrap().0, c(0.0, 0.0));
        assert_eq!(odd.mu_squared_zeta_weighted(10.0).unwrap().0, 0.0);
    }
}
