//! Quadrature building blocks and compensated summation.

use num_complex::Complex64;

use crate::{Error, Result};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated summation of complex numbers, componentwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A fixed Gauss–Legendre rule that can be mapped onto any interval.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (x, w) in self.mapped(a, b) {
            acc.add(f(x) * w);
        }
        acc.value()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let kron = kron * half;
    let gauss = gauss * half;
    (kron, (kron - gauss).norm())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub err: f64,
    pub evaluations: usize,
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of a complex integrand on [a, b].
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    integrate_adaptive_multi(&mut f, &[a, b], rel_tol, abs_tol, max_segments)
}

/// As [`integrate_adaptive`], starting from the given breakpoints.
pub fn integrate_adaptive_multi<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    let mut segs: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let (v, e) = kronrod15(f, w[0], w[1]);
        evaluations += 15;
        segs.push((w[0], w[1], v, e));
    }
    loop {
        let total: Complex64 = segs.iter().map(|s| s.2).collect::<ComplexSum>().value();
        let err: f64 = segs.iter().map(|s| s.3).collect::<CompensatedSum>().value();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(Integral {
                value: total,
                err,
                evaluations,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.3 > acc.1 { (i, s.3) } else { acc });
        let (a, b, _, _) = segs[worst];
        let m = 0.5 * (a + b);
        if segs.len() >= max_segments || m <= a || m >= b {
            return Err(Error::Quadrature {
                function: "integrate_adaptive",
                estimate: total.norm(),
                err,
            });
        }
        let (v1, e1) = kronrod15(f, a, m);
        let (v2, e2) = kronrod15(f, m, b);
        evaluations += 30;
        segs[worst] = (a, m, v1, e1);
        segs.push((m, b, v2, e2));
    }
}

/// Composite Simpson weights for `samples` equally spaced points (odd count).
pub fn simpson_weight(i: usize, samples: usize) -> f64 {
    if i == 0 || i + 1 == samples {
        1.0 / 3.0
    } else if i % 2 == 1 {
        4.0 / 3.0
    } else {
        2.0 / 3.0
    }
}

/// Chebyshev interpolant on [a, b] built from values at the Chebyshev points of the first kind.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    a: f64,
    b: f64,
    coeffs: Vec<Complex64>,
}

impl Chebyshev {
    /// The k-th of `n` interpolation nodes on [a, b].
    pub fn node(a: f64, b: f64, n: usize, k: usize) -> f64 {
        let x = (std::f64::consts::PI * (k as f64 + 0.5) / n as f64).cos();
        0.5 * (a + b) + 0.5 * (b - a) * x
    }

    pub fn from_values(a: f64, b: f64, values: &[Complex64]) -> Self {
        let n = values.len();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut acc = ComplexSum::new();
            for (k, v) in values.iter().enumerate() {
                let ang = std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / n as f64;
                acc.add(*v * ang.cos());
            }
            *c = acc.value() * (2.0 / n as f64);
        }
        coeffs[0] *= 0.5;
        Self { a, b, coeffs }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let y = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let y2 = 2.0 * y;
        let zero = Complex64::new(0.0, 0.0);
        let (mut d, mut dd) = (zero, zero);
        for c in self.coeffs.iter().skip(1).rev() {
            let t = d;
            d = d * y2 - dd + c;
            dd = t;
        }
        d * y - dd + self.coeffs[0]
    }

    /// Magnitude of the trailing coefficients, a proxy for the interpolation error.
    pub fn tail(&self) -> f64 {
        self.coeffs.iter().rev().take(3).map(|c| c.norm()).sum()
    }
}
