use num_complex::Complex64;

use crate::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k - 1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus the argument is shifted up before the asymptotic series is used.
const ASYMPTOTIC_RADIUS: f64 = 12.0;

const POLE_TOL: f64 = 1e-14;

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + corr * inv
}

/// Principal branch of log Γ(z), analytic off the negative real axis.
///
/// Arguments with small modulus or non-positive real part are shifted by the
/// recurrence `log Γ(z) = log Γ(z + N) - Σ log(z + k)`; each logarithm has
/// its cut on the negative real axis, so the sum stays on the principal branch.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::region("log_gamma", format!("non-finite argument {z}")));
    }
    if z.re <= 0.5 && z.im.abs() <= POLE_TOL {
        let k = z.re.round();
        if (z.re - k).abs() <= POLE_TOL {
            return Err(Error::Pole {
                function: "log_gamma",
                at: format!("{k}"),
            });
        }
    }
    let mut shift = 0u32;
    let mut w = z;
    while w.re < 0.5 || w.norm() < ASYMPTOTIC_RADIUS {
        w.re += 1.0;
        shift += 1;
    }
    let mut acc = stirling(w);
    for k in 0..shift {
        acc -= (z + k as f64).ln();
    }
    Ok(acc)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_adaptive;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-15 && half.im == 0.0);
        assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-14);
        assert!((gamma(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_integral_representation_at_one_plus_i() {
        // Γ(z) = ∫ t^{z-1} e^{-t} dt, split at t = 1 and mapped to finite intervals.
        let z = c(1.0, 1.0);
        let f = |t: f64| {
            if t <= 0.0 {
                return c(0.0, 0.0);
            }
            (c(t.ln(), 0.0) * (z - 1.0)).exp() * (-t).exp()
        };
        let head = integrate_adaptive(f, 0.0, 1.0, 1e-15, 1e-17, 2000).unwrap();
        // t = 1 / u on the tail.
        let g = |u: f64| if u <= 0.0 { c(0.0, 0.0) } else { f(1.0 / u) / (u * u) };
        let tail = integrate_adaptive(g, 0.0, 1.0, 1e-15, 1e-17, 2000).unwrap();
        let oracle = head.value + tail.value;
        let got = gamma(z).unwrap();
        assert!((got - oracle).norm() / oracle.norm() < 1e-12, "{got} vs {oracle}");
    }

    #[test]
    fn poles_are_rejected() {
        for k in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(k, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(log_gamma(c(-7.0, 1e-6)).is_ok());
    }

    #[test]
    fn reflection_formula_on_negative_axis_neighbourhood() {
        // Γ(z)Γ(1-z) = π / sin(πz)
        for z in [c(-3.3, 0.4), c(-0.7, -2.0), c(-25.5, 3.0), c(0.2, 40.0)] {
            let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
            let rhs = std::f64::consts::PI / (z * std::f64::consts::PI).sin();
            assert!((lhs - rhs).norm() / rhs.norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn branch_is_continuous_across_upper_half_plane() {
        // Im log Γ grows like t log t; check continuity along a path with many shifts.
        let mut prev = log_gamma(c(-20.5, 0.5)).unwrap();
        for k in 1..=400 {
            let z = c(-20.5 + 0.1 * k as f64, 0.5);
            let cur = log_gamma(z).unwrap();
            assert!((cur.im - prev.im).abs() < 1.0, "jump at {z}");
            prev = cur;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn recurrence(re in 0.1f64..10.0, im in -100.0f64..100.0) {
            let z = c(re, im);
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            // compare Γ values, i.e. modulo 2πi
            let d = (lhs - rhs).exp() - 1.0;
            prop_assert!(d.norm() < 1e-11);
        }

        #[test]
        fn conjugation(re in -30.0f64..30.0, im in 0.01f64..300.0) {
            let z = c(re, im);
            let a = log_gamma(z.conj()).unwrap();
            let b = log_gamma(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }
}
