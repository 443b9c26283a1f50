"""Independent oracles used by the test suite.

Nothing here imports the evaluation paths under test: the Marcum oracle is a
fixed-panel Gauss-Legendre quadrature of the Rice-density integral with the
Bessel I0 evaluated from its own series, the erfc oracle is arbitrary
precision quadrature of the defining integral, and the 2F1 oracle is direct
arbitrary-precision series summation.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np


def _i0e(z: np.ndarray) -> np.ndarray:
    """exp(-z) * I0(z) for z >= 0: power series below 30, asymptotic above."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    small = z <= 30.0
    if small.any():
        zs = z[small]
        q = 0.25 * zs * zs
        term = np.ones_like(zs)
        total = np.ones_like(zs)
        for k in range(1, 400):
            term = term * q / (k * k)
            total += term
            if np.all(term <= 1e-18 * total):
                break
        out[small] = total * np.exp(-zs)
    if (~small).any():
        zb = z[~small]
        term = np.ones_like(zb)
        total = np.ones_like(zb)
        for k in range(1, 26):
            term = term * (2 * k - 1) ** 2 / (8.0 * k * zb)
            total += term
        out[~small] = total / np.sqrt(2.0 * np.pi * zb)
    return out


def _panel_nodes(lo: float, hi: float, panel_width: float = 2.0, order: int = 24):
    x, w = np.polynomial.legendre.leggauss(order)
    n_panels = max(1, int(math.ceil((hi - lo) / panel_width)))
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    xs = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    return xs, ws


def marcum_q1_oracle(a: float, b: float) -> float:
    """Rice-density integral: int_b^inf t exp(-(t^2+a^2)/2) I0(a t) dt."""
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)
    hi = max(a, b) + 40.0
    t, w = _panel_nodes(b, hi)
    # t e^{-(t^2+a^2)/2} I0(at) == t e^{-(t-a)^2/2} * [e^{-at} I0(at)]
    vals = t * np.exp(-0.5 * (t - a) ** 2) * _i0e(a * t)
    return float(w @ vals)


def erfc_oracle(x: float, dps: int = 30) -> float:
    """(2/sqrt(pi)) * integral of exp(-t^2) from x to infinity, mpmath quad."""
    with mp.workdps(dps):
        val = 2.0 / mp.sqrt(mp.pi) * mp.quad(lambda t: mp.e ** (-t * t), [x, x + 30])
        return float(val)


def erfc_inv_oracle(y: float, dps: int = 30) -> float:
    """Bisection for erfc(x) = y on the quadrature oracle."""
    with mp.workdps(dps):
        lo, hi = mp.mpf(-30), mp.mpf(30)
        target = mp.mpf(y)
        f = lambda t: 2 / mp.sqrt(mp.pi) * mp.quad(lambda u: mp.e ** (-u * u), [t, t + 40])
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if f(mid) > target:
                lo = mid
            else:
                hi = mid
        return float(0.5 * (lo + hi))


def log_hyp2f1_nn1_oracle(n: int, z: float, dps: int = 50) -> float:
    """Direct series sum of 2F1(n, n; 1; z) to ~30 significant digits."""
    if z == 0.0:
        return 0.0
    with mp.workdps(dps):
        zz = mp.mpf(z)
        term = mp.mpf(1)
        total = mp.mpf(1)
        k = 0
        while True:
            term = term * ((n + k) * (n + k)) * zz / ((k + 1) * (k + 1))
            total += term
            k += 1
            if term < total * mp.mpf(10) ** (-dps + 5) and k > 4:
                break
        return float(mp.log(total))


def gauss_panel_integral(f, lo: float, hi: float, panels: int = 64, order: int = 32) -> float:
    """Fixed composite Gauss-Legendre integration (oracle-side quadrature)."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        total += half * sum(wi * f(mid + half * xi) for xi, wi in zip(x, w))
    return total
