//! Small arithmetic helpers: sieving, factorization, divisor sums.

use num_complex::Complex64;

/// All primes ≤ n, ascending.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    out
}

/// Prime factorization as (p, exponent) pairs, ascending in p.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// σ_a(m) = Σ_{d | m} d^a for complex a.
pub fn divisor_sigma(m: u64, a: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(m) {
        let pa = (a * (p as f64).ln()).exp();
        let mut term = Complex64::new(1.0, 0.0);
        let mut local = Complex64::new(1.0, 0.0);
        for _ in 0..e {
            term *= pa;
            local += term;
        }
        acc *= local;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_of_six() {
        assert_eq!(divisor_sigma(6, Complex64::new(0.0, 0.0)).re, 4.0);
        assert!((divisor_sigma(6, Complex64::new(1.0, 0.0)).re - 12.0).abs() < 1e-13);
    }

    #[test]
    fn sigma_matches_brute_force() {
        let a = Complex64::new(-0.3, 1.7);
        for m in 1..200u64 {
            let brute: Complex64 = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| (a * (d as f64).ln()).exp())
                .sum();
            assert!((divisor_sigma(m, a) - brute).norm() < 1e-12 * brute.norm());
        }
    }

    #[test]
    fn factorization_round_trip() {
        for m in 1..5000u64 {
            let prod: u64 = factorize(m).iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, m);
        }
        assert_eq!(primes_upto(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
