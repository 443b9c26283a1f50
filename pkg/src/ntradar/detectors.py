"""Test statistics for the target-present / target-absent decision.

Three detectors, all functions of the block means (P1, P2, Rc, Rs):

* correlator:      D0   = mean(Rc)         -- locally most powerful near
                                              rho = 0 when sigma1 = sigma2 = 1
                                              and phi = 0
* correlation MLE: rho^ = sqrt((Rc^2 + Rs^2) / (P1 P2))  -- scale invariant
* matched filter:  Dmf  = sqrt(Rc^2 + Rs^2)

A detection is declared when the statistic strictly exceeds the threshold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DomainError
from .signal_model import AuxStats


class DetectorKind(enum.Enum):
    D0 = "d0"
    RHO_HAT = "rhohat"
    MATCHED_FILTER = "mf"


@dataclass(frozen=True)
class DetectorStatistic:
    kind: DetectorKind
    value: float
    n: int


def compute(kind: DetectorKind, aux: AuxStats) -> DetectorStatistic:
    """Evaluate one detector on block means."""
    if kind is DetectorKind.D0:
        value = aux.rc_bar
    elif kind is DetectorKind.MATCHED_FILTER:
        value = math.hypot(aux.rc_bar, aux.rs_bar)
    elif kind is DetectorKind.RHO_HAT:
        if aux.p1_bar <= 0.0 or aux.p2_bar <= 0.0:
            raise DegenerateInputError(
                "correlation estimate undefined for zero mean power"
            )
        value = math.hypot(aux.rc_bar, aux.rs_bar) / math.sqrt(
            aux.p1_bar * aux.p2_bar
        )
        value = min(value, 1.0)  # Cauchy-Schwarz bound, guard roundoff
    else:
        raise DomainError(f"unknown detector kind {kind!r}")
    return DetectorStatistic(kind=kind, value=value, n=aux.n)


def declare(stat: DetectorStatistic, threshold: float) -> bool:
    """Detection declaration: strictly greater than the threshold."""
    threshold = float(threshold)
    if not math.isfinite(threshold):
        raise DomainError(f"threshold must be finite, got {threshold!r}")
    return stat.value > threshold


def statistics_from_aux(aux_means: np.ndarray) -> dict[DetectorKind, np.ndarray]:
    """Vectorized detector values from a (trials, 4) array of block means."""
    p1 = aux_means[:, 0]
    p2 = aux_means[:, 1]
    rc = aux_means[:, 2]
    rs = aux_means[:, 3]
    mag = np.hypot(rc, rs)
    return {
        DetectorKind.D0: rc.copy(),
        DetectorKind.RHO_HAT: np.minimum(mag / np.sqrt(p1 * p2), 1.0),
        DetectorKind.MATCHED_FILTER: mag,
    }
