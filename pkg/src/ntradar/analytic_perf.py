"""Closed-form and quadrature detection performance.

Probability of detection as a function of false-alarm probability for the
three detectors, in their large-sample-count forms and, for the correlation
estimator, from its exact finite-sample density.  In the large-N, small-rho
regime every curve collapses onto a single parameter: the product of the
sample count and the squared correlation coefficient (written ``nrho2``
throughout).
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._quad import adaptive_quad
from .errors import DomainError, NumericError, ValidityWarning
from .specfun import erfc, erfc_inv, log_hyp2f1_nn1, marcum_q1


class RocFamily(enum.Enum):
    """Which pd(pfa) expression produced a value or curve."""

    D0_FIRST_ORDER = "d0_first_order"
    D0_LARGE_N = "d0_large_n"
    RHOHAT_LARGE_N = "rhohat_large_n"
    RHOHAT_SMALL_RHO = "rhohat_small_rho"
    MF_LARGE_N = "mf_large_n"
    RHOHAT_EXACT = "rhohat_exact"


def _check_pfa(pfa: float) -> float:
    pfa = float(pfa)
    if not (0.0 < pfa < 1.0):
        raise DomainError(f"pfa must lie in (0, 1), got {pfa!r}")
    return pfa


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not (0.0 <= rho < 1.0):
        raise DomainError(f"rho must lie in [0, 1), got {rho!r}")
    return rho


def _check_n(n: int, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise DomainError(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_nrho2(nrho2: float) -> float:
    nrho2 = float(nrho2)
    if not (nrho2 >= 0.0):
        raise DomainError(f"nrho2 must be >= 0, got {nrho2!r}")
    return nrho2


def pd_d0_largeN(pfa: float, rho: float, n: int, phi: float = 0.0) -> float:
    """Large-N detection probability of the correlator D0 (phase dependent)."""
    pfa = _check_pfa(pfa)
    rho = _check_rho(rho)
    n = _check_n(n)
    if not math.isfinite(phi):
        raise DomainError(f"phi must be finite, got {phi!r}")
    rc = rho * math.cos(phi)
    shift = math.sqrt(n) * rc
    return 0.5 * erfc((erfc_inv(2.0 * pfa) - shift) / math.sqrt(1.0 + rc * rc))


def pd_d0_small_rho(pfa: float, nrho2: float) -> float:
    """First-order-in-rho D0 curve; depends only on nrho2 (phi = 0)."""
    pfa = _check_pfa(pfa)
    nrho2 = _check_nrho2(nrho2)
    return 0.5 * erfc(erfc_inv(2.0 * pfa) - math.sqrt(nrho2))


def pd_rhohat_largeN(pfa: float, rho: float, n: int) -> float:
    """Large-N detection probability of the correlation estimator.

    Accurate for n above roughly 100; a ValidityWarning is emitted (not an
    error) below that, since probing the breakdown region is legitimate.
    """
    pfa = _check_pfa(pfa)
    rho = _check_rho(rho)
    n = _check_n(n)
    if n < 100:
        warnings.warn(
            f"large-N correlation-estimator curve requested at n={n} < 100",
            ValidityWarning,
            stacklevel=2,
        )
    onem = 1.0 - rho * rho
    return marcum_q1(
        rho * math.sqrt(2.0 * n) / onem, math.sqrt(-2.0 * math.log(pfa)) / onem
    )


def pd_small_rho_marcum(pfa: float, nrho2: float) -> float:
    """Small-rho curve shared by the correlation estimator and matched filter."""
    pfa = _check_pfa(pfa)
    nrho2 = _check_nrho2(nrho2)
    return marcum_q1(math.sqrt(2.0 * nrho2), math.sqrt(-2.0 * math.log(pfa)))


def rhohat_log_pdf(x: float, rho: float, n: int) -> float:
    """log density of the correlation estimator at x for given (rho, n)."""
    rho = _check_rho(rho)
    n = _check_n(n, minimum=2)
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return -math.inf
    out = math.log(2.0 * (n - 1)) + n * math.log1p(-rho * rho) + math.log(x)
    if n > 2:
        if x == 1.0:
            return -math.inf
        out += (n - 2) * math.log1p(-x * x)
    out += log_hyp2f1_nn1(n, rho * rho * x * x)
    return out


def rhohat_pdf(x: float, rho: float, n: int) -> float:
    """Exact density of the correlation estimator (valid for any n >= 2)."""
    lp = rhohat_log_pdf(x, rho, n)
    return math.exp(lp) if lp > -745.0 else 0.0


def rhohat_null_threshold(pfa: float, n: int) -> float:
    """Threshold T with P(rhohat > T | rho = 0) = pfa.

    Closed form from the null CDF 1 - (1 - x^2)^(n-1).
    """
    pfa = _check_pfa(pfa)
    n = _check_n(n, minimum=2)
    return math.sqrt(-math.expm1(math.log(pfa) / (n - 1)))


def pd_rhohat_exact(pfa: float, rho: float, n: int, abs_tol: float = 1e-8) -> float:
    """Detection probability by integrating the exact estimator density."""
    pfa = _check_pfa(pfa)
    rho = _check_rho(rho)
    n = _check_n(n, minimum=2)
    threshold = rhohat_null_threshold(pfa, n)

    def integrand(x: float) -> float:
        if x <= 0.0 or x >= 1.0:
            return 0.0 if n > 2 else rhohat_pdf(min(max(x, 0.0), 1.0), rho, n)
        return rhohat_pdf(x, rho, n)

    seeds = tuple(p for p in (rho,) if threshold < p < 1.0)
    pd = adaptive_quad(
        integrand, threshold, 1.0, abs_tol=abs_tol, max_panels=4096, seed_points=seeds
    )
    return min(max(pd, 0.0), 1.0)


_INVERTIBLE = {
    RocFamily.D0_FIRST_ORDER: pd_d0_small_rho,
    RocFamily.RHOHAT_SMALL_RHO: pd_small_rho_marcum,
    RocFamily.MF_LARGE_N: pd_small_rho_marcum,
}


def required_nrho2(pd: float, pfa: float, family: RocFamily) -> float:
    """Invert a small-rho curve: the nrho2 achieving pd at the given pfa.

    Bisection on a monotone function, relative tolerance 1e-9.
    """
    pfa = _check_pfa(pfa)
    pd = float(pd)
    if not (pfa < pd < 1.0):
        raise DomainError(
            f"pd must lie in (pfa, 1) = ({pfa:g}, 1), got {pd!r}"
        )
    try:
        fn = _INVERTIBLE[family]
    except KeyError:
        raise DomainError(
            f"required_nrho2 supports small-rho families only, got {family!r}"
        ) from None

    lo = 0.0
    hi = 200.0 - 40.0 * math.log10(pfa)
    for _ in range(80):
        if fn(pfa, hi) >= pd:
            break
        hi *= 2.0
    else:
        raise NumericError(f"could not bracket nrho2 for pd={pd!r}, pfa={pfa!r}")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if fn(pfa, mid) < pd:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * hi + 1e-300:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RocCurve:
    """Ordered (pfa, pd) pairs plus a record of what produced them."""

    pfa: np.ndarray
    pd: np.ndarray
    provenance: dict = field(default_factory=dict)
    stderr: np.ndarray | None = None

    def __post_init__(self):
        pfa = np.asarray(self.pfa, dtype=np.float64)
        pd = np.asarray(self.pd, dtype=np.float64)
        object.__setattr__(self, "pfa", pfa)
        object.__setattr__(self, "pd", pd)
        if pfa.shape != pd.shape or pfa.ndim != 1:
            raise DomainError("pfa and pd must be 1-d arrays of equal length")
        if np.any((pfa <= 0.0) | (pfa >= 1.0)):
            raise DomainError("pfa values must lie in (0, 1)")
        if np.any((pd < 0.0) | (pd > 1.0)):
            raise DomainError("pd values must lie in [0, 1]")
        if np.any(np.diff(pfa) <= 0.0):
            raise DomainError("pfa grid must be strictly increasing")
        if np.any(np.diff(pd) < -1e-12):
            raise DomainError("pd must be nondecreasing in pfa")

    def to_rows(self) -> list[tuple[float, ...]]:
        if self.stderr is None:
            return list(zip(self.pfa.tolist(), self.pd.tolist()))
        return list(
            zip(self.pfa.tolist(), self.pd.tolist(), self.stderr.tolist())
        )

    def to_csv(self, path) -> None:
        cols = "pfa,pd" if self.stderr is None else "pfa,pd,stderr"
        with open(path, "w", newline="") as fh:
            fh.write(cols + "\n")
            for row in self.to_rows():
                fh.write(",".join(format(v, ".12g") for v in row) + "\n")

    def to_json_dict(self) -> dict:
        out = {
            "provenance": self.provenance,
            "points": [
                {"pfa": p, "pd": d} for p, d in zip(self.pfa.tolist(), self.pd.tolist())
            ],
        }
        if self.stderr is not None:
            for entry, se in zip(out["points"], self.stderr.tolist()):
                entry["stderr"] = se
        return out

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _check_grid(pfa_grid) -> np.ndarray:
    grid = np.asarray(list(pfa_grid), dtype=np.float64)
    if grid.size == 0:
        raise DomainError("pfa grid must be nonempty")
    if np.any((grid <= 0.0) | (grid >= 1.0)) or np.any(np.diff(grid) <= 0.0):
        raise DomainError("pfa grid must be strictly increasing within (0, 1)")
    return grid


def roc_curve(
    family: RocFamily,
    pfa_grid,
    *,
    nrho2: float | None = None,
    rho: float | None = None,
    n: int | None = None,
    phi: float = 0.0,
) -> RocCurve:
    """Pointwise pd over a pfa grid for one family; provenance recorded."""
    grid = _check_grid(pfa_grid)
    if family in _INVERTIBLE:
        if nrho2 is None:
            raise DomainError(f"{family.value} requires nrho2")
        pd = np.array([_INVERTIBLE[family](p, nrho2) for p in grid])
        prov = {"family": family.value, "nrho2": float(nrho2)}
    elif family is RocFamily.D0_LARGE_N:
        if rho is None or n is None:
            raise DomainError("d0_large_n requires rho and n")
        pd = np.array([pd_d0_largeN(p, rho, n, phi) for p in grid])
        prov = {"family": family.value, "rho": float(rho), "n": int(n), "phi": float(phi)}
    elif family is RocFamily.RHOHAT_LARGE_N:
        if rho is None or n is None:
            raise DomainError("rhohat_large_n requires rho and n")
        pd = np.array([pd_rhohat_largeN(p, rho, n) for p in grid])
        prov = {"family": family.value, "rho": float(rho), "n": int(n)}
    elif family is RocFamily.RHOHAT_EXACT:
        if rho is None or n is None:
            raise DomainError("rhohat_exact requires rho and n")
        pd = np.array([pd_rhohat_exact(p, rho, n) for p in grid])
        prov = {"family": family.value, "rho": float(rho), "n": int(n)}
    else:
        raise DomainError(f"unknown family {family!r}")
    return RocCurve(pfa=grid, pd=pd, provenance=prov)
