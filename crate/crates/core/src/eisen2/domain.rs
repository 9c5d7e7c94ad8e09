//! Brute-force quadrature over the truncated fundamental domain
//! `{|x| ≤ 1/2, x² + y² ≥ 1, y ≤ Y}` with the measure `dx dy / y²`.
//!
//! The domain splits into the arc region `√3/2 ≤ y ≤ 1`, parametrized by
//! `y = √(1 - u²)`, `u ≤ |x| ≤ 1/2` (smooth in u), and the rectangle `1 ≤ y ≤ Y`
//! cut into geometric panels. At every height the integrand is a trigonometric
//! polynomial in x, so its Fourier data are computed once per height.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    eisenstein_coefficients, eisenstein_from_coefficients, maass_coefficients, maass_from_coefficients,
    terms_needed,
};
use crate::maass::MaassForm;
use crate::quad::{ComplexSum, GaussRule};
use crate::specfun::QuadratureSpec;
use crate::{Error, Result};

/// Default height at which the domain is truncated.
pub const Y_CAP: f64 = 12.0;

/// Tensor Gauss rule on the truncated domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRule {
    pub x_nodes: usize,
    pub arc_nodes: usize,
    pub panel_nodes: usize,
    pub y_cap: f64,
}

impl Default for DomainRule {
    fn default() -> Self {
        Self {
            x_nodes: 64,
            arc_nodes: 16,
            panel_nodes: 16,
            y_cap: Y_CAP,
        }
    }
}

impl DomainRule {
    fn refined(self) -> Self {
        Self {
            x_nodes: self.x_nodes * 3 / 2,
            arc_nodes: self.arc_nodes * 3 / 2,
            panel_nodes: self.panel_nodes * 3 / 2,
            y_cap: self.y_cap,
        }
    }

    /// `(y, weight, x-intervals)` for every height, weight including `1/y²` and the
    /// arc Jacobian.
    fn heights(&self) -> Vec<(f64, f64, Vec<(f64, f64)>)> {
        let mut out = Vec::new();
        for (u, wu) in GaussRule::new(self.arc_nodes).mapped(0.0, 0.5) {
            let y = (1.0 - u * u).sqrt();
            out.push((y, wu * u / y / (y * y), vec![(-0.5, -u), (u, 0.5)]));
        }
        let mut a = 1.0;
        let rule = GaussRule::new(self.panel_nodes);
        while a < self.y_cap {
            let b = (a * 1.5).min(self.y_cap);
            for (y, wy) in rule.mapped(a, b) {
                out.push((y, wy / (y * y), vec![(-0.5, 0.5)]));
            }
            a = b;
        }
        out
    }
}

/// `∫ f dx dy / y²` over the truncated domain. `prepare(y)` is called once per height
/// and returns the integrand along that horizontal line. Heights are processed in
/// parallel and summed in a fixed order. Returns the value and the number of points.
pub fn domain_integral<P, F>(rule: &DomainRule, prepare: P) -> Result<(Complex64, usize)>
where
    P: Fn(f64) -> Result<F> + Sync,
    F: Fn(f64) -> Complex64,
{
    let xr = GaussRule::new(rule.x_nodes);
    let rows: Vec<Result<(Complex64, usize)>> = rule
        .heights()
        .into_par_iter()
        .map(|(y, wy, segments)| {
            let f = prepare(y)?;
            let mut acc = ComplexSum::new();
            let mut points = 0;
            for (a, b) in segments {
                for (x, wx) in xr.mapped(a, b) {
                    acc.add(f(x) * wx);
                    points += 1;
                }
            }
            Ok((acc.value() * wy, points))
        })
        .collect();
    let mut total = ComplexSum::new();
    let mut points = 0;
    for r in rows {
        let (v, p) = r?;
        total.add(v);
        points += p;
    }
    Ok((total.value(), points))
}

/// Area of the domain truncated at `rule.y_cap`, plus the exact tail `1/y_cap`.
pub fn fundamental_domain_volume(rule: &DomainRule) -> Result<f64> {
    let (v, _) = domain_integral(rule, |_| Ok(|_x: f64| Complex64::new(1.0, 0.0)))?;
    Ok(v.re + 1.0 / rule.y_cap)
}

/// `∫ |φ|² dμ`; equals 1 for a correctly normalized form.
pub fn petersson_norm_sq(form: &MaassForm, rule: &DomainRule) -> Result<f64> {
    let t = form.spectral_param();
    let parity = form.parity();
    let (v, _) = domain_integral(rule, |y| {
        let c = maass_coefficients(form, y, terms_needed(t, y))?;
        Ok(move |x: f64| Complex64::new(maass_from_coefficients(&c, parity, x).powi(2), 0.0))
    })?;
    Ok(v.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleProductResult {
    pub value: Complex64,
    pub quadrature_err: f64,
    pub points_used: usize,
    /// False when the refinement budget ran out before the tolerance was met; the
    /// value is then the best available and `quadrature_err` the last change.
    pub converged: bool,
}

const REFINEMENTS: usize = 4;

/// Relative accuracy of one integrand evaluation: the K-Bessel values and the
/// tabulated Hecke eigenvalues are good to about this level, so the quadrature cannot
/// resolve the integral better than this times `∫ |φ E E| dμ`.
const EVALUATION_ACCURACY: f64 = 1e-12;

/// `∫ φ(z) E(z, s1) E(z, s2) dμ` over the fundamental domain by tensor Gauss
/// quadrature, refined by factors of 3/2 until consecutive values agree to
/// `max(spec.rel_tol |I|, spec.abs_tol)`. The error is the last change, plus a bound
/// for the cusp beyond `Y_CAP`, plus the evaluation noise floor
/// `EVALUATION_ACCURACY · ∫ |φ E E| dμ`.
pub fn triple_product(
    form: &MaassForm,
    s1: Complex64,
    s2: Complex64,
    spec: &QuadratureSpec,
) -> Result<TripleProductResult> {
    if s1.im.abs() > 8.0 || s2.im.abs() > 8.0 {
        return Err(Error::precondition(
            "triple_product",
            format!("|Im| of the Eisenstein parameters must be at most 8 (got {s1}, {s2})"),
        ));
    }
    let t = form.spectral_param();
    let parity = form.parity();
    let integrand = |y: f64| -> Result<Box<dyn Fn(f64) -> Complex64>> {
        let phi = maass_coefficients(form, y, terms_needed(t, y))?;
        let e1 = eisenstein_coefficients(s1, y, terms_needed(s1.im, y))?;
        let e2 = eisenstein_coefficients(s2, y, terms_needed(s2.im, y))?;
        Ok(Box::new(move |x: f64| {
            eisenstein_from_coefficients(&e1, x)
                * eisenstein_from_coefficients(&e2, x)
                * maass_from_coefficients(&phi, parity, x)
        }))
    };
    let tail = cusp_tail(form, s1, s2, Y_CAP)?;
    let (mass, _) = domain_integral(&DomainRule::default(), |y| {
        let f = integrand(y)?;
        Ok(move |x: f64| Complex64::new(f(x).norm(), 0.0))
    })?;
    let floor = tail + EVALUATION_ACCURACY * mass.re;
    let mut rule = DomainRule::default();
    let (mut prev, mut points) = domain_integral(&rule, integrand)?;
    let mut change = f64::INFINITY;
    for _ in 0..REFINEMENTS {
        rule = rule.refined();
        let (v, p) = domain_integral(&rule, integrand)?;
        change = (v - prev).norm();
        prev = v;
        points += p;
        if change <= (spec.rel_tol * v.norm()).max(spec.abs_tol) {
            return Ok(TripleProductResult {
                value: v,
                quadrature_err: change + floor,
                points_used: points,
                converged: true,
            });
        }
    }
    Ok(TripleProductResult {
        value: prev,
        quadrature_err: change + floor,
        points_used: points,
        converged: false,
    })
}

/// Bound for `∫_{y > Y} |φ E E| dx dy/y²` from the leading terms: φ decays like its
/// first Fourier mode while each Eisenstein series grows at most like its constant term.
fn cusp_tail(form: &MaassForm, s1: Complex64, s2: Complex64, y_cap: f64) -> Result<f64> {
    let mode = maass_coefficients(form, y_cap, 1)?[1].abs();
    let e1 = eisenstein_coefficients(s1, y_cap, 0)?[0].norm();
    let e2 = eisenstein_coefficients(s2, y_cap, 0)?[0].norm();
    // the product decays at least like e^{-2πy} y^{Re(s1+s2)+1/2}; integrate it crudely
    Ok(2.0 * mode * e1 * e2 / (y_cap * y_cap) / (2.0 * std::f64::consts::PI - 1.0))
}
