//! The GL(2) layer: points of the upper half-plane, reduction to the standard
//! fundamental domain of SL(2, Z), Fourier expansions of `E(z, s)` and of Maass forms,
//! the unfolded triple product and its brute-force quadrature.
//!
//! Normalizations:
//! `E(z, s) = y^s + Λ(2s-1)/Λ(2s) y^{1-s}
//!           + 4/Λ(2s) Σ m^{s-1/2} σ_{1-2s}(m) √y K_{s-1/2}(2πmy) cos(2πmx)`
//! with `Λ(s) = π^{-s/2} Γ(s/2) ζ(s)`, and Maass forms as in [`crate::maass`].

mod domain;
mod unfold;

pub use domain::{domain_integral, fundamental_domain_volume, petersson_norm_sq, triple_product, DomainRule, TripleProductResult};
pub use unfold::{bessel_moment, bessel_moment_closed, i_closed, i_series, unfolding_params, SeriesValue};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::maass::{MaassForm, Parity};
use crate::specfun::{bessel_k, completed_zeta};
use crate::arith::divisor_sigma;
use crate::{Error, Result};

/// Tolerance on the fundamental-domain inequalities after reduction.
pub const REDUCTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::precondition("UpperHalfPoint", format!("need y > 0, got ({x}, {y})")));
        }
        Ok(Self { x, y })
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Apply the matrix `[[a, b], [c, d]]` of determinant 1.
    pub fn act(self, a: i64, b: i64, c: i64, d: i64) -> Self {
        let z = self.as_complex();
        let w = (z * a as f64 + b as f64) / (z * c as f64 + d as f64);
        Self { x: w.re, y: w.im }
    }

    pub fn is_reduced(self) -> bool {
        self.x.abs() <= 0.5 + REDUCTION_TOL && self.x * self.x + self.y * self.y >= 1.0 - REDUCTION_TOL
    }
}

/// Gauss reduction: translate into |x| ≤ 1/2, invert while |z| < 1. Each inversion
/// strictly increases y, so the loop terminates.
pub fn reduce(z: UpperHalfPoint) -> UpperHalfPoint {
    let (mut x, mut y) = (z.x, z.y);
    loop {
        x -= x.round();
        let r2 = x * x + y * y;
        if r2 >= 1.0 - REDUCTION_TOL {
            return UpperHalfPoint { x, y };
        }
        x = -x / r2;
        y /= r2;
    }
}

/// Number of Fourier terms after which `K_ν(2πmy)` has dropped far below the leading terms.
pub(crate) fn terms_needed(order_im: f64, y: f64) -> u64 {
    ((0.5 * PI * order_im.abs() + 40.0 + order_im.abs()) / (2.0 * PI * y)).ceil() as u64 + 1
}

fn check_eisenstein_parameter(s: Complex64) -> Result<()> {
    if (s - 1.0).norm() < 1e-10 {
        return Err(Error::Pole {
            function: "eisenstein_value",
            at: "s = 1".into(),
        });
    }
    Ok(())
}

/// `E(z, s)` from its Fourier expansion with `m_max` terms (automatic when `None`).
pub fn eisenstein_value(s: Complex64, z: UpperHalfPoint, m_max: Option<u64>) -> Result<Complex64> {
    check_eisenstein_parameter(s)?;
    let m_max = m_max.unwrap_or_else(|| terms_needed(s.im, z.y));
    let coeffs = eisenstein_coefficients(s, z.y, m_max)?;
    Ok(eisenstein_from_coefficients(&coeffs, z.x))
}

/// Size of the first omitted Fourier term, a proxy for the truncation error of
/// [`eisenstein_value`].
pub fn eisenstein_tail(s: Complex64, y: f64, m_max: u64) -> Result<f64> {
    check_eisenstein_parameter(s)?;
    let m = m_max + 1;
    let nu = s - 0.5;
    let lam = completed_zeta(s * 2.0)?;
    let k = bessel_k(nu, 2.0 * PI * m as f64 * y)?;
    let sigma = divisor_sigma(m, 1.0 - s * 2.0);
    let term = (nu * (m as f64).ln()).exp() * sigma * k * (4.0 * y.sqrt()) / lam;
    Ok(term.norm() / (1.0 - (-2.0 * PI * y).exp()))
}

/// `E(x + iy, s) = c[0] + Σ_{m ≥ 1} c[m] cos(2πmx)` at a fixed height.
pub(crate) fn eisenstein_coefficients(s: Complex64, y: f64, m_max: u64) -> Result<Vec<Complex64>> {
    let lam = completed_zeta(s * 2.0)?;
    let scatter = completed_zeta(s * 2.0 - 1.0)? / lam;
    let ln_y = y.ln();
    let mut out = Vec::with_capacity(m_max as usize + 1);
    out.push((s * ln_y).exp() + scatter * ((1.0 - s) * ln_y).exp());
    let nu = s - 0.5;
    let scale = 4.0 * y.sqrt() / lam;
    for m in 1..=m_max {
        let k = bessel_k(nu, 2.0 * PI * m as f64 * y)?;
        let sigma = divisor_sigma(m, 1.0 - s * 2.0);
        out.push((nu * (m as f64).ln()).exp() * sigma * k * scale);
    }
    Ok(out)
}

pub(crate) fn eisenstein_from_coefficients(coeffs: &[Complex64], x: f64) -> Complex64 {
    let mut acc = coeffs[0];
    for (m, c) in coeffs.iter().enumerate().skip(1) {
        acc += c * (2.0 * PI * m as f64 * x).cos();
    }
    acc
}

/// `φ(x + iy) = Σ_{m ≥ 1} c[m] cos(2πmx)` (or sin), with `c[0] = 0`.
pub(crate) fn maass_coefficients(form: &MaassForm, y: f64, m_max: u64) -> Result<Vec<f64>> {
    let lambda = form.coefficients(m_max, "maass_value")?;
    let rho = form.rho1()?;
    let t = Complex64::new(0.0, form.spectral_param());
    let scale = rho * y.sqrt();
    let mut out = vec![0.0; m_max as usize + 1];
    for m in 1..=m_max {
        if lambda[m as usize] != 0.0 {
            out[m as usize] = scale * lambda[m as usize] * bessel_k(t, 2.0 * PI * m as f64 * y)?.re;
        }
    }
    Ok(out)
}

pub(crate) fn maass_from_coefficients(coeffs: &[f64], parity: Parity, x: f64) -> f64 {
    let mut acc = 0.0;
    for (m, c) in coeffs.iter().enumerate().skip(1) {
        let arg = 2.0 * PI * m as f64 * x;
        acc += c * match parity {
            Parity::Even => arg.cos(),
            Parity::Odd => arg.sin(),
        };
    }
    acc
}

/// `φ(z)` from its Fourier expansion with `m_max` terms (automatic when `None`),
/// normalized to unit Petersson norm with `rho(1) > 0`.
pub fn maass_value(form: &MaassForm, z: UpperHalfPoint, m_max: Option<u64>) -> Result<f64> {
    let m_max = m_max.unwrap_or_else(|| terms_needed(form.spectral_param(), z.y));
    let coeffs = maass_coefficients(form, z.y, m_max)?;
    Ok(maass_from_coefficients(&coeffs, form.parity(), z.x))
}
