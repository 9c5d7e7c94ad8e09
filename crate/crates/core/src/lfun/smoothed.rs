//! Smoothed approximate functional equation with a tilted Gaussian test function.
//!
//! With `G(u) = exp(a u^2 + iβu)` and `F_w(y) = (1/2πi) ∫_(c) gamma(w + u) G(±u) y^{-u} du/u`,
//! shifting contours in `(1/2πi) ∫ Λ(s + u) G(u) du/u` gives
//! `Λ(s) = Σ λ(m) F⁺_s(m) m^{-s} + ε Σ λ(m) F⁻_{1-s}(m) m^{-(1-s)}`.
//! The tilt β cancels the exponential growth of the gamma ratio along the contour,
//! so `a` can be small and the sums stay short at large height.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{kappa, log_gamma_factor_raw, root_number, LMethod, LValue};
use crate::maass::MaassForm;
use crate::quad::{Chebyshev, ComplexSum};
use crate::specfun::{ln_int, QuadratureSpec};
use crate::{Error, Result};

const MAX_NODES: usize = 20_000;
const CHEB_POINTS: usize = 33;

/// Trapezoid discretization of `V(ξ) = (1/2πi) ∫_(c) R(u) G(u) e^{-uξ} du/u` with
/// `G(u) = exp(a u^2 + iβu)` and `log R` supplied by the caller.
pub(super) struct Weight {
    c: f64,
    v0: f64,
    delta: f64,
    nodes: Vec<Complex64>,
}

impl Weight {
    pub(super) fn build(
        log_ratio: impl Fn(Complex64) -> Result<Complex64>,
        a: f64,
        beta: f64,
        c: f64,
        tol: f64,
        function: &'static str,
    ) -> Result<Self> {
        // aliasing error ~ exp(-2πc/δ)
        let delta = c / 8.0;
        let node = |v: f64| -> Result<Complex64> {
            let u = Complex64::new(c, v);
            let log_g = u * u * a + Complex64::i() * beta * u;
            Ok((log_ratio(u)? + log_g).exp() / u * (delta / (2.0 * PI)))
        };
        let centre = node(0.0)?;
        let mut up = vec![centre];
        let mut down = Vec::new();
        let mut scale = centre.norm();
        for (dir, out) in [(1.0, &mut up), (-1.0, &mut down)] {
            let mut quiet = 0;
            let mut j = 1;
            while quiet < 4 {
                let z = node(dir * delta * j as f64)?;
                scale = scale.max(z.norm());
                quiet = if z.norm() < tol * 1e-3 * scale { quiet + 1 } else { 0 };
                out.push(z);
                j += 1;
                if j > MAX_NODES {
                    return Err(Error::Budget {
                        function,
                        detail: "weight integrand not decaying along the contour".into(),
                    });
                }
            }
        }
        let v0 = -delta * down.len() as f64;
        down.reverse();
        down.extend(up);
        Ok(Self {
            c,
            v0,
            delta,
            nodes: down,
        })
    }

    pub(super) fn eval(&self, xi: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, -self.delta * xi);
        let mut phase = Complex64::from_polar(1.0, -self.v0 * xi);
        let mut acc = Complex64::new(0.0, 0.0);
        for w in &self.nodes {
            acc += w * phase;
            phase *= step;
        }
        acc * (-self.c * xi).exp()
    }
}

/// Piecewise Chebyshev model of a weight on [lo, hi]; 1 below lo, 0 above hi.
struct WeightTable {
    lo: f64,
    hi: f64,
    width: f64,
    pieces: Vec<Chebyshev>,
    err: f64,
}

impl WeightTable {
    fn build(weight: &Weight, centre: f64, half_width: f64, tol: f64) -> Self {
        let mut lo = centre - half_width;
        let mut lo_err = 0.0;
        if lo <= 0.0 {
            lo = 0.0;
        } else {
            for _ in 0..8 {
                lo_err = (weight.eval(lo) - 1.0).norm();
                if lo_err <= tol || lo <= 0.0 {
                    break;
                }
                lo = (lo - 0.3 * half_width).max(0.0);
            }
            if lo <= 0.0 {
                lo_err = 0.0;
            }
        }
        let mut hi = centre + half_width;
        let mut hi_err = weight.eval(hi).norm();
        for _ in 0..8 {
            if hi_err <= tol {
                break;
            }
            hi += 0.3 * half_width;
            hi_err = weight.eval(hi).norm();
        }
        let hi = hi.max(lo + 1e-3);
        // a piece spans at most ~20 radians of the fastest retained oscillation
        let v_top = weight.v0 + weight.delta * (weight.nodes.len() - 1) as f64;
        let v_max = weight.v0.abs().max(v_top.abs());
        let max_width = (40.0 / v_max).min(1.0);
        let count = ((hi - lo) / max_width).ceil().max(1.0) as usize;
        let width = (hi - lo) / count as f64;
        let mut pieces = Vec::with_capacity(count);
        let mut tail = 0.0f64;
        for k in 0..count {
            let a = lo + width * k as f64;
            let b = a + width;
            let values: Vec<Complex64> = (0..CHEB_POINTS)
                .map(|j| weight.eval(Chebyshev::node(a, b, CHEB_POINTS, j)))
                .collect();
            let cheb = Chebyshev::from_values(a, b, &values);
            tail = tail.max(cheb.tail());
            pieces.push(cheb);
        }
        Self {
            lo,
            hi,
            width,
            pieces,
            err: tail + lo_err + hi_err,
        }
    }

    fn eval(&self, xi: f64) -> Complex64 {
        if xi < self.lo {
            return Complex64::new(1.0, 0.0);
        }
        if xi > self.hi {
            return Complex64::new(0.0, 0.0);
        }
        let k = (((xi - self.lo) / self.width) as usize).min(self.pieces.len() - 1);
        self.pieces[k].eval(xi)
    }

    fn last_index(&self) -> u64 {
        self.hi.exp().floor().max(1.0) as u64
    }
}

/// `(log-scale centre, tilt β)` of the weight for `gamma(w + u) / gamma(w)`.
fn transition(kap: f64, t: f64, w: Complex64) -> (f64, f64) {
    let it = Complex64::new(0.0, t);
    let zp = (w + kap + it) * 0.5;
    let zm = (w + kap - it) * 0.5;
    let centre = 0.5 * (zp.norm() * zm.norm()).ln() - PI.ln();
    let beta = -0.5 * (zp.arg() + zm.arg());
    (centre, beta)
}

/// L(s, phi) in -0.2 < Re s < 1.2 (or anywhere off the gamma poles) by the smoothed
/// approximate functional equation. The target accuracy is `spec.rel_tol` relative
/// to the size of the two sums.
pub fn afe_smoothed(form: &MaassForm, s: Complex64, spec: &QuadratureSpec) -> Result<LValue> {
    let a = (1.0 / s.im.abs().max(1e-300)).clamp(1.0 / 64.0, 0.5);
    afe_smoothed_with(form, s, spec, a)
}

/// [`afe_smoothed`] with an explicit Gaussian width `a`. The result is independent of
/// `a` exactly when the functional equation used is the right one.
pub(crate) fn afe_smoothed_with(
    form: &MaassForm,
    s: Complex64,
    spec: &QuadratureSpec,
    a: f64,
) -> Result<LValue> {
    let tol = spec.rel_tol.clamp(1e-14, 1e-4);
    let kap = kappa(form);
    let t = form.spectral_param();
    let c = 1.25 + (s.re - 0.5).abs();
    let half_width = 1.15 * (4.0 * a * (1.0 / tol).ln()).sqrt();

    let (centre, beta) = transition(kap, t, s);
    let base = log_gamma_factor_raw(kap, t, s)?;
    let primal = Weight::build(
        |u| Ok(log_gamma_factor_raw(kap, t, s + u)? - base),
        a,
        beta,
        c,
        tol,
        "afe_smoothed",
    )?;
    let primal_table = WeightTable::build(&primal, centre, half_width, tol);

    let dual_s = 1.0 - s;
    let on_line = (s.re - 0.5).abs() < 1e-15;
    let (dual_centre, _) = transition(kap, t, dual_s);
    let dual_table = if on_line {
        None
    } else {
        // G(-u) = exp(a u^2 - iβu)
        let base = log_gamma_factor_raw(kap, t, dual_s)?;
        let dual = Weight::build(
            |u| Ok(log_gamma_factor_raw(kap, t, dual_s + u)? - base),
            a,
            -beta,
            c,
            tol,
            "afe_smoothed",
        )?;
        Some(WeightTable::build(&dual, dual_centre, half_width, tol))
    };

    let m_primal = primal_table.last_index();
    let m_dual = dual_table.as_ref().map_or(m_primal, |d| d.last_index());
    let m_max = m_primal.max(m_dual);
    if m_max > form.table_limit() {
        return Err(Error::InsufficientCoefficients {
            function: "afe_smoothed",
            needed: m_max,
            available: form.table_limit(),
        });
    }
    let lambda = form.coefficients(m_max, "afe_smoothed")?;

    let mut first = ComplexSum::new();
    let mut second = ComplexSum::new();
    let (mut mass1, mut mass2) = (0.0, 0.0);
    for m in 1..=m_max {
        let l = lambda[m as usize];
        if l == 0.0 {
            continue;
        }
        let xi = ln_int(m as usize);
        if m <= m_primal {
            let term = (-s * xi).exp() * l;
            mass1 += term.norm();
            first.add(term * primal_table.eval(xi));
        }
        if m <= m_dual {
            let term = (-dual_s * xi).exp() * l;
            mass2 += term.norm();
            let v = match &dual_table {
                Some(d) => d.eval(xi),
                None => primal_table.eval(xi).conj(),
            };
            second.add(term * v);
        }
    }
    let dual_err = dual_table.as_ref().map_or(primal_table.err, |d| d.err);
    let root = (log_gamma_factor_raw(kap, t, dual_s)? - log_gamma_factor_raw(kap, t, s)?).exp()
        * root_number(form);
    let value = first.value() + root * second.value();
    let err = primal_table.err * mass1
        + dual_err * root.norm() * mass2
        + 1e-15 * (mass1 + root.norm() * mass2);
    Ok(LValue {
        value,
        err_estimate: err,
        method: LMethod::AfeSmoothed,
    })
}
