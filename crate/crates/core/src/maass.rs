//! Hecke–Maass cusp forms for SL(2, Z): data model, ingestion, Hecke
//! multiplicativity and the Petersson normalization of the first coefficient.
//!
//! Convention: with `rho(1) > 0`,
//! `phi(z) = sqrt(y) Σ_{m≥1} rho(1) λ(m) K_{it}(2π m y) cos(2π m x)` (even forms,
//! `sin` for odd forms) has unit norm for the measure `dx dy / y^2`, and
//! `|rho(1)|^2 = 8 / Λ(1, ad phi)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::arith::{factorize, primes_upto};
use crate::lfun::{adjoint_l, LValue};
use crate::specfun::log_gamma;
use crate::{Error, Result};

/// Tolerance for file-supplied composite coefficients against multiplicativity.
pub const COMPOSITE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kim–Sarnak bound with a small safety margin.
pub fn hecke_bound(p: u64) -> f64 {
    let e = (p as f64).powf(7.0 / 64.0);
    e + 1.0 / e + 0.01
}

/// An immutable, validated Hecke–Maass cusp form.
#[derive(Debug)]
pub struct MaassForm {
    spectral_param: f64,
    parity: Parity,
    p_max: u64,
    primes: BTreeMap<u64, f64>,
    /// λ(m) for m < table.len(); NaN where a prime factor exceeds pmax and the
    /// file supplied no value.
    table: Vec<f64>,
    label: String,
    adjoint: OnceLock<std::result::Result<LValue, Error>>,
}

impl Clone for MaassForm {
    fn clone(&self) -> Self {
        Self {
            spectral_param: self.spectral_param,
            parity: self.parity,
            p_max: self.p_max,
            primes: self.primes.clone(),
            table: self.table.clone(),
            label: self.label.clone(),
            adjoint: OnceLock::new(),
        }
    }
}

impl MaassForm {
    /// Build a form from λ(p) for every prime p ≤ `p_max`, checking the invariants.
    pub fn new(
        spectral_param: f64,
        parity: Parity,
        p_max: u64,
        primes: BTreeMap<u64, f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::with_composites(spectral_param, parity, p_max, primes, &BTreeMap::new(), label)
    }

    /// As [`MaassForm::new`], also accepting composite coefficients. Those with all
    /// prime factors ≤ `p_max` must agree with multiplicativity to [`COMPOSITE_TOL`];
    /// the others extend the coefficient table.
    pub fn with_composites(
        spectral_param: f64,
        parity: Parity,
        p_max: u64,
        primes: BTreeMap<u64, f64>,
        composites: &BTreeMap<u64, f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if !(spectral_param > 0.0) || !spectral_param.is_finite() {
            return Err(Error::precondition(
                "MaassForm",
                format!("spectral parameter must be positive, got {spectral_param}"),
            ));
        }
        for p in primes_upto(p_max) {
            let Some(&value) = primes.get(&p) else {
                return Err(Error::MissingPrime { p, p_max });
            };
            let bound = hecke_bound(p);
            if !(value.abs() <= bound) {
                return Err(Error::InvariantViolation { p, value, bound });
            }
        }
        let top = composites.keys().next_back().copied().unwrap_or(0).max(p_max);
        let mut form = Self {
            spectral_param,
            parity,
            p_max,
            primes,
            table: Vec::new(),
            label: label.into(),
            adjoint: OnceLock::new(),
        };
        let mut table = vec![f64::NAN; top as usize + 1];
        for (m, slot) in table.iter_mut().enumerate().skip(1) {
            if let Ok(v) = form.lambda_from_primes(m as u64) {
                *slot = v;
            }
        }
        for (&m, &value) in composites {
            let slot = &mut table[m as usize];
            if slot.is_nan() {
                *slot = value;
            } else if (*slot - value).abs() > COMPOSITE_TOL {
                return Err(Error::HeckeResidual {
                    m,
                    value,
                    expected: *slot,
                });
            }
        }
        form.table = table;
        Ok(form)
    }

    /// A form with λ(p) = f(p) for every prime p ≤ `p_max`; invariants are still checked.
    pub fn synthetic(
        spectral_param: f64,
        parity: Parity,
        p_max: u64,
        f: impl Fn(u64) -> f64,
    ) -> Result<Self> {
        let primes = primes_upto(p_max).into_iter().map(|p| (p, f(p))).collect();
        Self::new(spectral_param, parity, p_max, primes, "synthetic")
    }

    pub fn spectral_param(&self) -> f64 {
        self.spectral_param
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hecke_at_primes(&self) -> &BTreeMap<u64, f64> {
        &self.primes
    }

    /// Largest M such that λ(m) is tabulated for every m ≤ M.
    pub fn table_limit(&self) -> u64 {
        self.table
            .iter()
            .skip(1)
            .position(|v| v.is_nan())
            .map(|i| i as u64)
            .unwrap_or(self.table.len() as u64 - 1)
    }

    /// λ(1..=m_max) as a vector indexed from 0 (entry 0 is unused and set to 0).
    pub fn coefficients(&self, m_max: u64, function: &'static str) -> Result<Vec<f64>> {
        if m_max <= self.table_limit() {
            let mut v = self.table[..=m_max as usize].to_vec();
            v[0] = 0.0;
            return Ok(v);
        }
        let mut v = vec![0.0; m_max as usize + 1];
        for m in 1..=m_max {
            v[m as usize] = self.hecke_lambda(m).map_err(|_| Error::InsufficientCoefficients {
                function,
                needed: m_max,
                available: self.table_limit(),
            })?;
        }
        Ok(v)
    }

    /// λ(m), by multiplicativity and `λ(p^{k+1}) = λ(p)λ(p^k) - λ(p^{k-1})`.
    pub fn hecke_lambda(&self, m: u64) -> Result<f64> {
        if m == 0 {
            return Err(Error::precondition("hecke_lambda", "m must be positive"));
        }
        if let Some(&v) = self.table.get(m as usize) {
            if !v.is_nan() {
                return Ok(v);
            }
        }
        self.lambda_from_primes(m)
    }

    fn lambda_from_primes(&self, m: u64) -> Result<f64> {
        let mut acc = 1.0;
        for (p, e) in factorize(m) {
            let Some(&lp) = self.primes.get(&p) else {
                return Err(Error::OutOfRange { m, p_max: self.p_max });
            };
            let (mut prev, mut cur) = (1.0, lp);
            for _ in 1..e {
                let next = lp * cur - prev;
                prev = cur;
                cur = next;
            }
            acc *= cur;
        }
        Ok(acc)
    }

    /// (1/x) Σ_{n ≤ x} λ(n)^2.
    pub fn rankin_selberg_average(&self, x: u64) -> Result<f64> {
        let c = self.coefficients(x, "rankin_selberg_average")?;
        Ok(c.iter().map(|v| v * v).sum::<f64>() / x as f64)
    }

    /// L(1, ad phi), computed once and cached.
    pub fn adjoint_l_at_1(&self) -> Result<LValue> {
        self.adjoint
            .get_or_init(|| adjoint_l(self, Complex64::new(1.0, 0.0)))
            .clone()
    }

    /// Λ(1, ad phi) = L_∞(1, ad phi) L(1, ad phi).
    pub fn completed_adjoint_at_1(&self) -> Result<f64> {
        Ok(adjoint_gamma_at_1(self.spectral_param)? * self.adjoint_l_at_1()?.value.re)
    }

    /// |rho(1)|^2 = 8 / Λ(1, ad phi).
    pub fn rho1_squared(&self) -> Result<f64> {
        Ok(8.0 / self.completed_adjoint_at_1()?)
    }

    /// rho(1) under the convention rho(1) > 0.
    pub fn rho1(&self) -> Result<f64> {
        Ok(self.rho1_squared()?.sqrt())
    }
}

/// L_∞(1, ad) = π^{-3/2} Γ(1/2) Γ(1/2 + it) Γ(1/2 - it), assembled from log-gamma.
pub fn adjoint_gamma_at_1(t: f64) -> Result<f64> {
    let half = Complex64::new(0.5, 0.0);
    let it = Complex64::new(0.0, t);
    let lg = log_gamma(half)? + log_gamma(half + it)? + log_gamma(half - it)?;
    Ok((lg - 1.5 * PI.ln()).exp().re)
}

fn parse_err(line: usize, content: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        content: content.to_string(),
        reason: reason.into(),
    }
}

/// Parse the line-oriented form format:
/// `# comment`, `R <decimal>`, `parity even|odd`, `pmax <integer>`, `a <n> <decimal>`.
pub fn parse_maass_form(text: &str, label: &str) -> Result<MaassForm> {
    let mut r = None;
    let mut parity = None;
    let mut p_max = None;
    let mut coeffs: BTreeMap<u64, f64> = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["R", v] => {
                let v: f64 = v.parse().map_err(|_| parse_err(line_no, raw, "bad decimal"))?;
                if r.replace(v).is_some() {
                    return Err(parse_err(line_no, raw, "duplicate R line"));
                }
            }
            ["parity", v] => {
                let p = match *v {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(parse_err(line_no, raw, "parity must be even or odd")),
                };
                if parity.replace(p).is_some() {
                    return Err(parse_err(line_no, raw, "duplicate parity line"));
                }
            }
            ["pmax", v] => {
                let v: u64 = v.parse().map_err(|_| parse_err(line_no, raw, "bad integer"))?;
                if p_max.replace(v).is_some() {
                    return Err(parse_err(line_no, raw, "duplicate pmax line"));
                }
            }
            ["a", n, v] => {
                let n: u64 = n.parse().map_err(|_| parse_err(line_no, raw, "bad index"))?;
                let v: f64 = v.parse().map_err(|_| parse_err(line_no, raw, "bad decimal"))?;
                if n == 0 || !v.is_finite() {
                    return Err(parse_err(line_no, raw, "index must be positive, value finite"));
                }
                if coeffs.insert(n, v).is_some() {
                    return Err(parse_err(line_no, raw, "duplicate coefficient"));
                }
            }
            _ => return Err(parse_err(line_no, raw, "unrecognized line")),
        }
    }
    let end = last_line + 1;
    let r = r.ok_or_else(|| parse_err(end, "", "missing R line"))?;
    let parity = parity.ok_or_else(|| parse_err(end, "", "missing parity line"))?;
    let p_max = p_max.ok_or_else(|| parse_err(end, "", "missing pmax line"))?;
    if let Some(&a1) = coeffs.get(&1) {
        if (a1 - 1.0).abs() > COMPOSITE_TOL {
            return Err(Error::HeckeResidual {
                m: 1,
                value: a1,
                expected: 1.0,
            });
        }
    }
    let mut primes = BTreeMap::new();
    let mut composites = BTreeMap::new();
    let prime_set: std::collections::BTreeSet<u64> = primes_upto(p_max).into_iter().collect();
    for (n, v) in coeffs {
        if prime_set.contains(&n) {
            primes.insert(n, v);
        } else if n > 1 {
            composites.insert(n, v);
        }
    }
    MaassForm::with_composites(r, parity, p_max, primes, &composites, label)
}

pub fn load_maass_form(path: impl AsRef<Path>) -> Result<MaassForm> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_maass_form(&text, &label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_file(lambda2: f64, skip: Option<u64>, pmax: u64) -> String {
        let mut s = String::from("# test\nR 13.7797513519\nparity even\n");
        s += &format!("pmax {pmax}\n");
        for p in primes_upto(pmax) {
            if Some(p) == skip {
                continue;
            }
            let v = if p == 2 { lambda2 } else { 0.1 };
            s += &format!("a {p} {v}\n");
        }
        s
    }

    #[test]
    fn parses_and_extends_multiplicatively() {
        let f = parse_maass_form(&small_file(1.549304477941, None, 10), "t").unwrap();
        assert!((f.spectral_param() - 13.7797513519).abs() < 1e-12);
        assert_eq!(f.hecke_lambda(1).unwrap(), 1.0);
        let l2 = f.hecke_lambda(2).unwrap();
        let l3 = f.hecke_lambda(3).unwrap();
        assert_eq!(f.hecke_lambda(6).unwrap(), l2 * l3);
        assert_eq!(f.hecke_lambda(4).unwrap(), l2 * l2 - 1.0);
        assert_eq!(f.hecke_lambda(8).unwrap(), l2 * (l2 * l2 - 1.0) - l2);
        assert!(matches!(f.hecke_lambda(11), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn missing_prime_and_bound_violation() {
        let e = parse_maass_form(&small_file(0.5, Some(7), 10), "t").unwrap_err();
        assert_eq!(e, Error::MissingPrime { p: 7, p_max: 10 });
        let e = parse_maass_form(&small_file(9.0, None, 10), "t").unwrap_err();
        assert!(matches!(e, Error::InvariantViolation { p: 2, .. }));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = "R 1.0\nparity sideways\npmax 3\n";
        match parse_maass_form(text, "t").unwrap_err() {
            Error::Parse { line, content, .. } => {
                assert_eq!(line, 2);
                assert_eq!(content, "parity sideways");
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(parse_maass_form("R 1\nR 2\n", "t"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn corrupt_composite_is_detected() {
        let mut text = small_file(0.5, None, 10);
        text += "a 6 0.3\n";
        assert!(matches!(parse_maass_form(&text, "t"), Err(Error::HeckeResidual { m: 6, .. })));
    }

    #[test]
    fn adjoint_gamma_reflection_identity() {
        // Γ(1/2 + it)Γ(1/2 - it) = π / cosh(πt), so L_∞(1, ad) = 1 / cosh(πt).
        for t in [0.0, 1.0, 9.53, 13.78, 100.0] {
            let got = adjoint_gamma_at_1(t).unwrap();
            let want = 1.0 / (PI * t).cosh();
            assert!((got / want - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn synthetic_zero_form_recursion() {
        let f = MaassForm::synthetic(5.0, Parity::Even, 100, |_| 0.0).unwrap();
        assert_eq!(f.hecke_lambda(4).unwrap(), -1.0);
        assert_eq!(f.hecke_lambda(16).unwrap(), 1.0);
        assert_eq!(f.hecke_lambda(8).unwrap(), 0.0);
        assert_eq!(f.hecke_lambda(36).unwrap(), 1.0);
    }
}
