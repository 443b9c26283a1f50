"""Generalized-logistic approximation of the pd-vs-nrho2 curves.

The sigmoid y(x) = A / (1 + S e^{-k x})^d is fitted to the small-rho detection
curves by minimizing the mean integral square error over [0, L] with
L = 15 - 3 log10(pfa).  The amplitude A = 1 and exponent d = 2 are held fixed;
only the shape S and rate k are free.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ._quad import legendre_nodes
from .analytic_perf import pd_d0_small_rho, pd_small_rho_marcum
from .errors import DomainError, NumericError, OptimizationError


class FitFamily(enum.Enum):
    D0 = "d0"
    MARCUM = "marcum"


TABLE_PFAS: tuple[float, ...] = tuple(10.0**-e for e in range(1, 11))


@dataclass(frozen=True)
class LogisticFit:
    """Parameters of y(x) = amplitude / (1 + shape * exp(-rate * x))^exponent."""

    shape: float
    rate: float
    amplitude: float = 1.0
    exponent: float = 2.0
    epsilon: float | None = None
    pfa: float | None = None
    family: FitFamily | None = None

    def __post_init__(self):
        if not (self.shape > 0.0 and self.rate > 0.0):
            raise DomainError("shape and rate must be positive")
        if not (self.amplitude > 0.0 and self.exponent > 0.0):
            raise DomainError("amplitude and exponent must be positive")
        if self.epsilon is not None and self.epsilon < 0.0:
            raise DomainError("epsilon must be nonnegative")


def logistic_eval(fit: LogisticFit, x):
    """Evaluate the sigmoid; accepts scalars or numpy arrays."""
    return fit.amplitude / (1.0 + fit.shape * np.exp(-fit.rate * np.asarray(x, dtype=np.float64))) ** fit.exponent


def logistic_inverse(fit: LogisticFit, y: float) -> float:
    """x with y(x) = y, for y strictly inside (0, amplitude)."""
    y = float(y)
    if not (0.0 < y < fit.amplitude):
        raise DomainError(
            f"y must lie in (0, {fit.amplitude:g}), got {y!r}"
        )
    return math.log(fit.shape / ((fit.amplitude / y) ** (1.0 / fit.exponent) - 1.0)) / fit.rate


@dataclass(frozen=True)
class FitObjectiveSpec:
    """Target curve and quadrature settings for one (family, pfa) fit."""

    pfa: float
    family: FitFamily
    upper_limit: float | None = None
    node_counts: tuple[int, ...] = (256, 512, 1024, 2048)
    agree_tol: float = 1e-10

    def __post_init__(self):
        if not (0.0 < self.pfa < 1.0):
            raise DomainError(f"pfa must lie in (0, 1), got {self.pfa!r}")
        if self.upper_limit is None:
            object.__setattr__(
                self, "upper_limit", 15.0 - 3.0 * math.log10(self.pfa)
            )
        if not (self.upper_limit > 0.0):
            raise DomainError("upper integration limit must be positive")


@lru_cache(maxsize=256)
def _target_nodes(family: FitFamily, pfa: float, limit: float, nodes: int):
    xs, ws = legendre_nodes(nodes, 0.0, limit)
    fn = pd_d0_small_rho if family is FitFamily.D0 else pd_small_rho_marcum
    tgt = np.array([fn(pfa, float(x)) for x in xs])
    return xs, ws, tgt


def ise_objective(spec: FitObjectiveSpec, shape: float, rate: float) -> float:
    """Mean integral square error of the sigmoid against the target curve."""
    if not (shape > 0.0 and rate > 0.0):
        raise DomainError("shape and rate must be positive")
    fit = LogisticFit(shape=shape, rate=rate)
    prev = None
    for nodes in spec.node_counts:
        xs, ws, tgt = _target_nodes(spec.family, spec.pfa, spec.upper_limit, nodes)
        resid = tgt - logistic_eval(fit, xs)
        val = float(ws @ (resid * resid)) / spec.upper_limit
        if prev is not None and abs(val - prev) <= spec.agree_tol:
            return val
        prev = val
    raise NumericError(
        f"ISE quadrature did not stabilize for pfa={spec.pfa:g}, "
        f"family={spec.family.value}"
    )


def _nelder_mead(fn, x0, fatol=1e-10, xatol=1e-9, max_iter=800):
    """Minimal Nelder-Mead on R^d; returns (x, fval, iterations, converged)."""
    dim = len(x0)
    simplex = [np.asarray(x0, dtype=np.float64)]
    for i in range(dim):
        vertex = simplex[0].copy()
        vertex[i] += 0.4
        simplex.append(vertex)
    values = [fn(v) for v in simplex]

    for it in range(max_iter):
        order = np.argsort(values)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread = values[-1] - values[0]
        size = max(np.max(np.abs(v - simplex[0])) for v in simplex[1:])
        if spread <= fatol and size <= xatol:
            return simplex[0], values[0], it, True

        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + (centroid - simplex[-1])
        f_r = fn(reflected)
        if f_r < values[0]:
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            f_e = fn(expanded)
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
        elif f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
        else:
            contracted = centroid + 0.5 * (simplex[-1] - centroid)
            f_c = fn(contracted)
            if f_c < values[-1]:
                simplex[-1], values[-1] = contracted, f_c
            else:  # shrink toward the best vertex
                for i in range(1, dim + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = fn(simplex[i])
    order = np.argsort(values)
    return simplex[order[0]], values[order[0]], max_iter, False


def fit_logistic(spec: FitObjectiveSpec) -> LogisticFit:
    """Fit (shape, rate) with amplitude = 1, exponent = 2 held fixed.

    Multi-start Nelder-Mead in log-parameter space, starts on a log-spaced
    grid over shape in [0.5, 100] and rate in [0.05, 2].
    """

    def objective(theta: np.ndarray) -> float:
        return ise_objective(spec, math.exp(theta[0]), math.exp(theta[1]))

    best = None
    trace = []
    for s0 in np.geomspace(0.5, 100.0, 5):
        for k0 in np.geomspace(0.05, 2.0, 4):
            theta, fval, iters, converged = _nelder_mead(
                objective, np.array([math.log(s0), math.log(k0)])
            )
            trace.append(
                {
                    "start": (float(s0), float(k0)),
                    "theta": theta.tolist(),
                    "fval": fval,
                    "iterations": iters,
                    "converged": converged,
                }
            )
            if converged and (best is None or fval < best[1]):
                best = (theta, fval)
    if best is None:
        raise OptimizationError(
            f"no Nelder-Mead start converged for pfa={spec.pfa:g}, "
            f"family={spec.family.value}",
            trace,
        )
    # polish from the best vertex
    theta, fval, _, converged = _nelder_mead(objective, best[0])
    if not converged or fval > best[1]:
        theta, fval = best
    return LogisticFit(
        shape=math.exp(theta[0]),
        rate=math.exp(theta[1]),
        epsilon=fval,
        pfa=spec.pfa,
        family=spec.family,
    )


def reproduce_tables() -> list[LogisticFit]:
    """Fits for both families over pfa = 1e-1 ... 1e-10 (20 rows)."""
    return [
        fit_logistic(FitObjectiveSpec(pfa=pfa, family=family))
        for family in (FitFamily.D0, FitFamily.MARCUM)
        for pfa in TABLE_PFAS
    ]


def table_rows(fits: list[LogisticFit]) -> list[dict]:
    return [
        {
            "family": fit.family.value,
            "pfa": fit.pfa,
            "shape": fit.shape,
            "rate": fit.rate,
            "epsilon": fit.epsilon,
        }
        for fit in fits
    ]


def write_table_csv(fits: list[LogisticFit], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("family,pfa,S,k,epsilon\n")
        for row in table_rows(fits):
            fh.write(
                f"{row['family']},{row['pfa']:.12g},{row['shape']:.12g},"
                f"{row['rate']:.12g},{row['epsilon']:.12g}\n"
            )


def write_table_json(fits: list[LogisticFit], path) -> None:
    with open(path, "w") as fh:
        json.dump(table_rows(fits), fh, indent=2, sort_keys=True)
        fh.write("\n")
