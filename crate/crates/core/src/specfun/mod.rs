//! Complex special functions: log-gamma, Riemann zeta, completed zeta, K-Bessel.

mod bessel;
mod gamma;
mod zeta;

pub(crate) use zeta::ln_int;
pub use bessel::{bessel_k, bessel_k_flagged, BesselK, BESSEL_ORDER_CEILING};
pub use gamma::{gamma, log_gamma};
pub use zeta::{
    completed_zeta, log_completed_zeta, riemann_zeta, riemann_zeta_with_ceiling, ZETA_IM_CEILING,
};

use crate::{Error, Result};

/// Tolerances, truncation lengths and grid rules shared by the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection depth budget for adaptive schemes.
    pub max_levels: u32,
    /// Maximum number of terms in any truncated series.
    pub series_cap: usize,
    /// Step rule for t-integrals: `grid_step <= c_grid / (n log 2T)`.
    pub c_grid: f64,
    /// Explicit step for t-integrals, overriding the rule when set.
    pub grid_step: Option<f64>,
    /// Relative change allowed when the t-grid is halved.
    pub grid_rel_tol: f64,
    /// Exponent in the truncation `m <= T^(1 + eps)` of the paper-form AFE.
    pub afe_eps: f64,
    /// Largest number of t-samples a single moment window may use.
    pub max_samples: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_levels: 40,
            series_cap: 1_000_000,
            c_grid: 0.15,
            grid_step: None,
            grid_rel_tol: 1e-3,
            afe_eps: 0.1,
            max_samples: 2_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |detail: &str| Err(Error::precondition("QuadratureSpec", detail));
        if !(self.rel_tol > 0.0) {
            return bad("rel_tol must be positive");
        }
        if !(self.abs_tol > 0.0) {
            return bad("abs_tol must be positive");
        }
        if self.max_levels < 1 {
            return bad("max_levels must be at least 1");
        }
        if self.series_cap < 1 {
            return bad("series_cap must be at least 1");
        }
        if !(self.c_grid > 0.0) || !(self.grid_rel_tol > 0.0) {
            return bad("grid rule parameters must be positive");
        }
        if let Some(h) = self.grid_step {
            if !(h > 0.0) {
                return bad("grid_step must be positive");
            }
        }
        if !(self.afe_eps > 0.0 && self.afe_eps < 0.5) {
            return bad("afe_eps must lie in (0, 1/2)");
        }
        if self.max_samples < 2 {
            return bad("max_samples must be at least 2");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_spec_is_valid() {
        QuadratureSpec::default().validate().unwrap();
    }

    proptest! {
        #[test]
        fn nonpositive_tolerances_are_rejected(rel in -1.0f64..=0.0, abs in -1.0f64..=0.0) {
            let spec = QuadratureSpec { rel_tol: rel, ..Default::default() };
            prop_assert!(spec.validate().is_err());
            let spec = QuadratureSpec { abs_tol: abs, ..Default::default() };
            prop_assert!(spec.validate().is_err());
        }
    }
}
