use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::log_gamma;
use crate::quad::ComplexSum;
use crate::{Error, Result};

/// Default limit on |Im s| accepted by [`riemann_zeta`].
pub const ZETA_IM_CEILING: f64 = 5000.0;

/// B_{2k} / (2k)! for k = 1..8.
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

const LN_TABLE_LEN: usize = 16_384;

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_TABLE_LEN).map(|n| (n.max(1) as f64).ln()).collect())
}

#[inline]
pub(crate) fn ln_int(n: usize) -> f64 {
    if n < LN_TABLE_LEN {
        ln_table()[n]
    } else {
        (n as f64).ln()
    }
}

/// ζ(s) for Re s > 0 by Euler–Maclaurin summation with `N = max(64, 2⌈|Im s|⌉)`.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    riemann_zeta_with_ceiling(s, ZETA_IM_CEILING)
}

pub fn riemann_zeta_with_ceiling(s: Complex64, ceiling: f64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::region("riemann_zeta", format!("Re s = {} <= 0", s.re)));
    }
    if (s - 1.0).norm() <= 1e-14 {
        return Err(Error::Pole {
            function: "riemann_zeta",
            at: "1".into(),
        });
    }
    if s.im.abs() > ceiling {
        return Err(Error::CeilingExceeded {
            function: "riemann_zeta",
            im: s.im.abs(),
            ceiling,
        });
    }
    let n = 64usize.max(2 * s.im.abs().ceil() as usize);
    let mut acc = ComplexSum::new();
    for k in 1..n {
        let l = ln_int(k);
        let mag = (-s.re * l).exp();
        let (sin, cos) = (s.im * l).sin_cos();
        acc.add(Complex64::new(mag * cos, -mag * sin));
    }
    let nf = n as f64;
    let ln_n = ln_int(n);
    let n_pow = (-s * ln_n).exp();
    acc.add(n_pow * nf / (s - 1.0));
    acc.add(n_pow * 0.5);
    // s (s+1) ... (s + 2k - 2) N^{-s-2k+1}
    let mut term = s * n_pow / nf;
    for (k, c) in EM_COEFFS.iter().enumerate() {
        acc.add(term * *c);
        let j = 2.0 * (k as f64 + 1.0);
        term = term * (s + (j - 1.0)) * (s + j) / (nf * nf);
    }
    Ok(acc.value())
}

fn check_completed_poles(s: Complex64) -> Result<()> {
    for p in [0.0, 1.0] {
        if (s - p).norm() <= 1e-14 {
            return Err(Error::Pole {
                function: "completed_zeta",
                at: format!("{p}"),
            });
        }
    }
    Ok(())
}

/// log Λ(s) with Λ(s) = π^{-s/2} Γ(s/2) ζ(s), reflected to Re s > 0.
///
/// Use this where Λ itself would underflow (large |Im s|). The imaginary part
/// is determined only modulo 2π.
pub fn log_completed_zeta(s: Complex64) -> Result<Complex64> {
    check_completed_poles(s)?;
    let s = if s.re <= 0.0 { 1.0 - s } else { s };
    let ln_pi = std::f64::consts::PI.ln();
    Ok(-s * 0.5 * ln_pi + log_gamma(s * 0.5)? + riemann_zeta(s)?.ln())
}

/// Λ(s) = π^{-s/2} Γ(s/2) ζ(s); values with Re s ≤ 0 come from Λ(1 - s).
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    check_completed_poles(s)?;
    let s = if s.re <= 0.0 { 1.0 - s } else { s };
    let ln_pi = std::f64::consts::PI.ln();
    Ok((-s * 0.5 * ln_pi + log_gamma(s * 0.5)?).exp() * riemann_zeta(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::CompensatedSum;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_two() {
        let z = riemann_zeta(c(2.0, 0.0)).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14 && z.im.abs() < 1e-16);
    }

    #[test]
    fn zeta_three_halves_against_partial_sum() {
        // 10^7 terms plus the Euler–Maclaurin tail N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12.
        let n = 10_000_000u64;
        let mut acc = CompensatedSum::new();
        for k in (1..=n).rev() {
            acc.add((k as f64).powf(-1.5));
        }
        let nf = n as f64;
        let tail = nf.powf(-0.5) / 0.5 - 0.5 * nf.powf(-1.5) + 1.5 * nf.powf(-2.5) / 12.0;
        let oracle = acc.value() + tail;
        let got = riemann_zeta(c(1.5, 0.0)).unwrap();
        assert!((got.re - oracle).abs() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn first_zero_is_bracketed() {
        // The real and imaginary parts of ζ(1/2 + it) both change sign close to t = 14.1347.
        let z = riemann_zeta(c(0.5, 14.134725)).unwrap();
        assert!(z.norm() < 1e-4);
        let zl = riemann_zeta(c(0.5, 14.13)).unwrap();
        let zr = riemann_zeta(c(0.5, 14.14)).unwrap();
        assert!(zl.re * zr.re < 0.0 || zl.im * zr.im < 0.0);
    }

    #[test]
    fn zeta_contract() {
        assert!(matches!(riemann_zeta(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(riemann_zeta(c(-0.5, 3.0)), Err(Error::Region { .. })));
        assert!(matches!(riemann_zeta(c(0.5, 6000.0)), Err(Error::CeilingExceeded { .. })));
    }

    #[test]
    fn zeta_at_large_height_matches_known_value() {
        // reference value from an arbitrary-precision evaluation
        let z = riemann_zeta(c(0.5, 1000.0)).unwrap();
        assert!((z - c(0.356_334_367_194_396_06, 0.931_997_831_232_993_7)).norm() < 1e-9, "{z}");
    }

    #[test]
    fn completed_zeta_assembly() {
        let l2 = completed_zeta(c(2.0, 0.0)).unwrap();
        assert!((l2.re - PI / 6.0).abs() < 1e-14);
        let l3 = completed_zeta(c(3.0, 0.0)).unwrap();
        let direct = PI.powf(-1.5) * 0.5 * PI.sqrt() * 1.202_056_903_159_594_2;
        assert!((l3.re - direct).abs() < 1e-14);
        assert!(matches!(completed_zeta(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn functional_equation_in_strip() {
        for k in 0..50 {
            let s = c(0.05 + 0.9 * ((k * 7) % 50) as f64 / 49.0, -100.0 + 200.0 * k as f64 / 49.0);
            let a = completed_zeta(s).unwrap();
            let b = completed_zeta(1.0 - s).unwrap();
            // Λ underflows towards |Im s| = 100; compare in log form as well.
            assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-300), "{s}");
            let la = log_completed_zeta(s).unwrap();
            let lb = log_completed_zeta(1.0 - s).unwrap();
            assert!(((la - lb).exp() - 1.0).norm() < 1e-9);
        }
    }
}
