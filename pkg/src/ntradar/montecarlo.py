"""Empirical validation engine.

Simulates independent processing intervals, calibrates detector thresholds
under the target-absent hypothesis, and estimates detection probabilities
under the target-present hypothesis.  Trial t of a run draws its samples
from Philox stream ``stream_base + t``, so results are bitwise independent
of how trials are partitioned over worker threads.

Direct Monte Carlo is used down to pfa = 1e-3 at desk scale (the calibration
guard requires trials * pfa >= 100); smaller false-alarm probabilities are
validated analytically only.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import _accel
from .analytic_perf import RocCurve, _check_grid
from .detectors import DetectorKind, statistics_from_aux
from .errors import DomainError, InsufficientTrialsError
from .signal_model import SignalParams, covariance_factor

H0_STREAM_BASE = 0
H1_STREAM_BASE = 1 << 62

_MAX_AUTO_WORKERS = 8


@dataclass(frozen=True)
class McConfig:
    """Full description of one Monte Carlo run (results are a pure function of it)."""

    kind: DetectorKind
    params: SignalParams
    n: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n!r}")


@dataclass(frozen=True)
class McResult:
    """Empirical detection probability with its binomial standard error."""

    pd_hat: float
    pfa_target: float | None
    threshold: float
    stderr: float
    config: McConfig

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["kind"] = self.config.kind.value
        cfg["params"]["variant"] = self.config.params.variant.value
        return {
            "pd_hat": self.pd_hat,
            "pfa_target": self.pfa_target,
            "threshold": self.threshold,
            "stderr": self.stderr,
            "config": cfg,
        }


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        import os

        return max(1, min(os.cpu_count() or 1, _MAX_AUTO_WORKERS))
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers!r}")
    return workers


def simulate_aux_means(
    params: SignalParams,
    n: int,
    trials: int,
    seed: int,
    stream_base: int = H0_STREAM_BASE,
    workers: int | None = None,
) -> np.ndarray:
    """(trials, 4) per-trial means of (P1, P2, Rc, Rs)."""
    factor = covariance_factor(params)
    sign = params.variant.sign
    workers = _resolve_workers(workers)
    out = np.empty((trials, 4), dtype=np.float64)
    if workers == 1 or trials < 4 * workers:
        _accel.aux_mean_batch(factor, n, seed, stream_base, trials, sign, out=out)
        return out
    chunk = -(-trials // workers)
    ranges = [(t0, min(t0 + chunk, trials)) for t0 in range(0, trials, chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(
                _accel.aux_mean_batch,
                factor,
                n,
                seed,
                stream_base + t0,
                t1 - t0,
                sign,
                out[t0:t1],
            )
            for t0, t1 in ranges
        ]
        for fut in futures:
            fut.result()
    return out


def detector_statistics(
    params: SignalParams,
    n: int,
    trials: int,
    seed: int,
    stream_base: int = H0_STREAM_BASE,
    workers: int | None = None,
) -> dict[DetectorKind, np.ndarray]:
    """Per-trial values of all three detectors from one simulation pass."""
    aux = simulate_aux_means(params, n, trials, seed, stream_base, workers)
    return statistics_from_aux(aux)


def min_calibration_trials(pfa: float) -> int:
    return int(math.ceil(100.0 / pfa))


def _check_calibration(trials: int, pfa: float) -> None:
    if not (0.0 < pfa < 1.0):
        raise DomainError(f"pfa must lie in (0, 1), got {pfa!r}")
    if trials * pfa < 100.0:
        raise InsufficientTrialsError(trials, pfa, min_calibration_trials(pfa))


def empirical_threshold(sorted_stats: np.ndarray, pfa: float) -> float:
    """Order statistic at (1-based) index ceil(trials * (1 - pfa))."""
    trials = sorted_stats.size
    k = math.ceil(trials * (1.0 - pfa))
    k = min(max(k, 1), trials)
    return float(sorted_stats[k - 1])


def calibrate_threshold(
    kind: DetectorKind,
    params_h0: SignalParams,
    n: int,
    pfa: float,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> float:
    """Empirical (1 - pfa) quantile of the detector under the null scene."""
    if params_h0.rho != 0.0:
        raise DomainError("threshold calibration requires a rho = 0 scene")
    _check_calibration(trials, pfa)
    stats = detector_statistics(
        params_h0, n, trials, seed, H0_STREAM_BASE, workers
    )[kind]
    stats.sort()
    return empirical_threshold(stats, pfa)


def estimate_pd(
    kind: DetectorKind,
    params_h1: SignalParams,
    n: int,
    threshold: float,
    trials: int,
    seed: int,
    workers: int | None = None,
    pfa_target: float | None = None,
) -> McResult:
    """Fraction of target-present trials whose statistic exceeds the threshold."""
    threshold = float(threshold)
    if not math.isfinite(threshold):
        raise DomainError(f"threshold must be finite, got {threshold!r}")
    stats = detector_statistics(
        params_h1, n, trials, seed, H1_STREAM_BASE, workers
    )[kind]
    hits = int(np.count_nonzero(stats > threshold))
    pd_hat = hits / trials
    return McResult(
        pd_hat=pd_hat,
        pfa_target=pfa_target,
        threshold=threshold,
        stderr=math.sqrt(pd_hat * (1.0 - pd_hat) / trials),
        config=McConfig(kind=kind, params=params_h1, n=n, trials=trials, seed=seed),
    )


def empirical_roc(
    kind: DetectorKind,
    params_h1: SignalParams,
    n: int,
    pfa_grid,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> RocCurve:
    """Empirical ROC: one null calibration pass reused across the pfa grid."""
    grid = _check_grid(pfa_grid)
    _check_calibration(trials, float(grid.min()))
    h0 = detector_statistics(
        params_h1.under_null(), n, trials, seed, H0_STREAM_BASE, workers
    )[kind]
    h0.sort()
    h1 = detector_statistics(params_h1, n, trials, seed, H1_STREAM_BASE, workers)[kind]
    pd = np.empty(grid.size)
    stderr = np.empty(grid.size)
    thresholds = []
    for i, pfa in enumerate(grid):
        thr = empirical_threshold(h0, float(pfa))
        hits = int(np.count_nonzero(h1 > thr))
        pd[i] = hits / trials
        stderr[i] = math.sqrt(pd[i] * (1.0 - pd[i]) / trials)
        thresholds.append(thr)
    provenance = {
        "method": "monte_carlo",
        "kind": kind.value,
        "rho": params_h1.rho,
        "sigma1": params_h1.sigma1,
        "sigma2": params_h1.sigma2,
        "phi": params_h1.phi,
        "variant": params_h1.variant.value,
        "n": int(n),
        "trials": int(trials),
        "seed": int(seed),
        "thresholds": thresholds,
    }
    return RocCurve(pfa=grid, pd=pd, provenance=provenance, stderr=stderr)


def ks_two_sample(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    nx, ny = x.size, y.size
    if nx == 0 or ny == 0:
        raise DomainError("KS test requires nonempty samples")
    both = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, both, side="right") / nx
    cdf_y = np.searchsorted(y, both, side="right") / ny
    d = float(np.max(np.abs(cdf_x - cdf_y)))
    ne = nx * ny / (nx + ny)
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    # Kolmogorov tail: 2 sum_j (-1)^(j-1) exp(-2 j^2 lam^2)
    p = 0.0
    for j in range(1, 101):
        term = 2.0 * (-1.0) ** (j - 1) * math.exp(-2.0 * j * j * lam * lam)
        p += term
        if abs(term) < 1e-10:
            break
    return d, min(max(p, 0.0), 1.0)
