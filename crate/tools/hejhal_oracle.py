#!/usr/bin/env python3
"""Generate Hecke eigenvalue tables for level-one Maass cusp forms.

Independent oracle for the data files under data/. Two stages:

1. Hejhal's linear system at moderate height pins the spectral parameter R
   (secant iteration on the Y-dependence of the solution) and the first
   coefficients.
2. The expansion from stage 1 is evaluated at pulled-back points of a very
   low horocycle; a discrete cosine/sine transform of those samples yields
   every coefficient up to N at once.

K-Bessel values of imaginary order come from mpmath at elevated precision,
cached as piecewise Chebyshev interpolants of exp(pi R / 2) K_{iR}(x).

Usage: hejhal_oracle.py even|odd R_GUESS N OUT_PATH
"""

import sys
import time

import mpmath as mp
import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.fft import dct, dst

mp.mp.dps = 30


def kscaled(r, x):
    """exp(pi r / 2) * K_{ir}(x) as a float."""
    v = mp.besselk(1j * mp.mpf(r), mp.mpf(x)) * mp.exp(mp.pi * mp.mpf(r) / 2)
    return float(mp.re(v))


class KTable:
    """Piecewise Chebyshev interpolant of kscaled(r, .) on [lo, hi]."""

    def __init__(self, r, lo=5.0, hi=95.0, width=3.0, deg=32):
        self.r = r
        self.edges = np.arange(lo, hi + width, width)
        self.pieces = []
        for a, b in zip(self.edges[:-1], self.edges[1:]):
            f = np.vectorize(lambda x: kscaled(r, x))
            self.pieces.append(C.Chebyshev.interpolate(f, deg, domain=[a, b]))
        self.lo, self.hi = self.edges[0], self.edges[-1]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if np.any(x < self.lo):
            raise ValueError("argument below table range")
        idx = np.clip(((x - self.lo) // (self.edges[1] - self.edges[0])).astype(int), 0, len(self.pieces) - 1)
        inside = x < self.hi
        for i, p in enumerate(self.pieces):
            m = inside & (idx == i)
            if m.any():
                out[m] = p(x[m])
        return out


def pullback(x, y):
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    while True:
        x = x - np.floor(x + 0.5)
        r2 = x * x + y * y
        m = r2 < 1.0 - 1e-14
        if not m.any():
            return x, y
        x[m] = -x[m] / r2[m]
        y[m] = y[m] / r2[m]


def trig(parity):
    return np.cos if parity == "even" else np.sin


def hejhal_system(r, parity, m0, q, ybase):
    """Solve for a(2..m0) with a(1) = 1 at height ybase."""
    f = trig(parity)
    xm = (np.arange(1, q + 1) - 0.5) / (2 * q)
    xs, ys = pullback(xm, np.full(q, ybase))
    n = np.arange(1, m0 + 1)
    kstar = np.array([[kscaled(r, 2 * np.pi * k * yy) for k in n] for yy in ys])
    kbase = np.array([kscaled(r, 2 * np.pi * k * ybase) for k in n])
    # expansion at pulled-back points: rows m, columns n
    expand = np.sqrt(ys)[:, None] * kstar * f(2 * np.pi * np.outer(xs, n))
    proj = f(2 * np.pi * np.outer(n, xm))  # rows k, columns m
    v = (2.0 / q) * proj @ expand - np.diag(np.sqrt(ybase) * kbase)
    rhs = -v[1:, 0]
    sol = np.linalg.solve(v[1:, 1:], rhs)
    return np.concatenate([[1.0], sol])


def refine_r(r0, parity, m0=22, q=34, y1=0.78, y2=0.70, iters=8):
    def g(r):
        a = hejhal_system(r, parity, m0, q, y1)
        b = hejhal_system(r, parity, m0, q, y2)
        return a[1] - b[1], a

    ra, rb = r0, r0 + 1e-7
    ga, _ = g(ra)
    gb, coeffs = g(rb)
    for _ in range(iters):
        if gb == ga:
            break
        rc = rb - gb * (rb - ra) / (gb - ga)
        ra, ga = rb, gb
        rb = rc
        gb, coeffs = g(rb)
        print(f"  R = {rb:.16f}  residual = {gb:.3e}", file=sys.stderr)
        if abs(gb) < 1e-14:
            break
    return rb, coeffs


def all_coefficients(r, parity, head, n_max, ktab):
    """Coefficients a(1..n_max) via the low-horocycle transform."""
    m0 = len(head)
    f = trig(parity)
    best = np.zeros(n_max + 1)
    best_w = np.zeros(n_max + 1)
    spread = np.zeros(n_max + 1)
    ns = np.arange(1, n_max + 1)
    estimates = []
    for frac in (0.93, 0.86):
        ybase = frac * r / (2 * np.pi * n_max)
        q = int(np.ceil((n_max + 80.0 / (2 * np.pi * ybase)) / 2)) + 16
        xm = (np.arange(1, q + 1) - 0.5) / (2 * q)
        xs, ys = pullback(xm, np.full(q, ybase))
        phi = np.zeros(q)
        for k in range(1, m0 + 1):
            arg = 2 * np.pi * k * ys
            kv = np.where(arg < ktab.hi, ktab(np.minimum(arg, ktab.hi - 1e-9)), 0.0)
            phi += head[k - 1] * np.sqrt(ys) * kv * f(2 * np.pi * k * xs)
        if parity == "even":
            # dct type 2: y_k = 2 sum_m x_m cos(pi k (2m+1) / 2q)
            tr = dct(phi, type=2)[1 : n_max + 1] / q
        else:
            # dst type 2: y_k = 2 sum_m x_m sin(pi (k+1)(2m+1) / 2q)
            tr = dst(phi, type=2)[: n_max] / q
        t0 = time.time()
        kb = np.array([kscaled(r, 2 * np.pi * k * ybase) for k in ns])
        print(f"  Y = {ybase:.3e}, Q = {q}, {time.time() - t0:.0f}s", file=sys.stderr)
        w = np.sqrt(ybase) * kb
        estimates.append((tr / w, np.abs(w)))
    (e1, w1), (e2, w2) = estimates
    pick = w1 >= w2
    best[1:] = np.where(pick, e1, e2)
    best_w[1:] = np.maximum(w1, w2)
    spread[1:] = np.abs(e1 - e2)
    return best, spread


def primes_upto(n):
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if s[p]:
            s[p * p :: p] = False
    return np.nonzero(s)[0]


def main():
    parity, r0, n_max, out = sys.argv[1], float(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    print(f"refining R for {parity} form", file=sys.stderr)
    r, head = refine_r(r0, parity)
    print("building K table", file=sys.stderr)
    ktab = KTable(r)
    a, spread = all_coefficients(r, parity, head, n_max, ktab)
    a = a / a[1]
    # Hecke residuals as a quality report
    ps = primes_upto(n_max)
    worst = 0.0
    for p in ps:
        if p * p <= n_max:
            worst = max(worst, abs(a[p * p] - (a[p] ** 2 - 1)))
    for m in range(2, 200):
        for k in range(m + 1, n_max // m + 1):
            if np.gcd(m, k) == 1:
                worst = max(worst, abs(a[m * k] - a[m] * a[k]))
    print(f"max Hecke residual {worst:.3e}; max two-height spread {spread[1:].max():.3e}", file=sys.stderr)
    with open(out, "w") as fh:
        fh.write(f"# level-one Hecke-Maass cusp form, {parity}\n")
        fh.write("# Hejhal-method coefficients (tools/hejhal_oracle.py)\n")
        fh.write(f"# max Hecke residual {worst:.2e}\n")
        fh.write(f"R {r:.15f}\n")
        fh.write(f"parity {parity}\n")
        fh.write(f"pmax {int(ps[-1])}\n")
        for n in range(1, n_max + 1):
            fh.write(f"a {n} {a[n]:.15f}\n")


if __name__ == "__main__":
    main()
