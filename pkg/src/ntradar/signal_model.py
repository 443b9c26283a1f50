"""Covariance model and correlated I/Q sample generation.

The received/reference voltages (i1, q1, i2, q2) are zero-mean jointly
Gaussian with block covariance

    [ sigma1^2 * I2            rho*sigma1*sigma2*R ]
    [ rho*sigma1*sigma2*R.T    sigma2^2 * I2       ]

where R is a rotation or a reflection by the inter-signal phase.  The two
variants produce identical statistics for the derived quantities once the
matching sign convention is used in (Rc, Rs); the flag governs both jointly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _accel
from .errors import DomainError


class Variant(enum.Enum):
    """Cross-covariance structure: rotation (noise radar) or reflection (QTMS)."""

    ROTATION = "rotation"
    REFLECTION = "reflection"

    @property
    def sign(self) -> int:
        """Sign convention for the correlation products (+1 rotation)."""
        return 1 if self is Variant.ROTATION else -1


@dataclass(frozen=True)
class SignalParams:
    """Covariance parameters of one radar scene."""

    rho: float
    sigma1: float = 1.0
    sigma2: float = 1.0
    phi: float = 0.0
    variant: Variant = Variant.ROTATION

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0):
            raise DomainError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not (self.sigma1 > 0.0 and self.sigma2 > 0.0):
            raise DomainError("sigma1 and sigma2 must be positive")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi!r}")
        if not isinstance(self.variant, Variant):
            raise DomainError(f"variant must be a Variant, got {self.variant!r}")

    def under_null(self) -> "SignalParams":
        """Same scene with the target absent (rho = 0)."""
        return replace(self, rho=0.0)


def build_covariance(params: SignalParams) -> np.ndarray:
    """4x4 covariance matrix in (i1, q1, i2, q2) order."""
    c = math.cos(params.phi)
    s = math.sin(params.phi)
    if params.variant is Variant.ROTATION:
        r = np.array([[c, s], [-s, c]])
    else:
        r = np.array([[c, s], [s, -c]])
    off = params.rho * params.sigma1 * params.sigma2 * r
    cov = np.empty((4, 4))
    cov[:2, :2] = params.sigma1**2 * np.eye(2)
    cov[2:, 2:] = params.sigma2**2 * np.eye(2)
    cov[:2, 2:] = off
    cov[2:, :2] = off.T
    return cov


def covariance_factor(params: SignalParams) -> np.ndarray:
    """A 4x4 factor A with A @ A.T equal to the covariance matrix.

    Cholesky for rho < 1; an eigendecomposition factor at rho = 1 where the
    matrix is rank deficient.
    """
    cov = build_covariance(params)
    if params.rho < 1.0:
        try:
            return np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:  # PD for rho < 1: cannot happen
            raise RuntimeError(
                f"internal error: Cholesky failed for rho={params.rho!r}"
            ) from exc
    w, v = np.linalg.eigh(cov)
    return v * np.sqrt(np.clip(w, 0.0, None))


@dataclass(frozen=True)
class IQBlock:
    """One coherent processing interval of n four-channel voltage samples."""

    i1: np.ndarray
    q1: np.ndarray
    i2: np.ndarray
    q2: np.ndarray
    seed: int
    stream: int

    @property
    def n(self) -> int:
        return self.i1.size

    def __post_init__(self):
        if not (self.i1.size == self.q1.size == self.i2.size == self.q2.size):
            raise DomainError("all four channels must have the same length")
        if self.i1.size < 1:
            raise DomainError("a block needs at least one sample")


def sample_block(params: SignalParams, n: int, seed: int, stream: int = 0) -> IQBlock:
    """Draw n i.i.d. samples from the scene; deterministic in (seed, stream)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    quads = _accel.sample_quads(covariance_factor(params), n, seed, stream)
    return IQBlock(
        i1=quads[:, 0],
        q1=quads[:, 1],
        i2=quads[:, 2],
        q2=quads[:, 3],
        seed=seed,
        stream=stream,
    )


@dataclass(frozen=True)
class AuxStats:
    """Sample means of the powers and correlation products over a block."""

    p1_bar: float
    p2_bar: float
    rc_bar: float
    rs_bar: float
    n: int


def aux_series(block: IQBlock, variant: Variant) -> tuple[np.ndarray, ...]:
    """Per-sample (P1, P2, Rc, Rs) values with the variant's sign convention."""
    sgn = float(variant.sign)
    p1 = block.i1**2 + block.q1**2
    p2 = block.i2**2 + block.q2**2
    rc = block.i1 * block.i2 + sgn * (block.q1 * block.q2)
    rs = block.i1 * block.q2 - sgn * (block.i2 * block.q1)
    return p1, p2, rc, rs


def aux_stats(block: IQBlock, variant: Variant) -> AuxStats:
    """Block means of (P1, P2, Rc, Rs)."""
    p1, p2, rc, rs = aux_series(block, variant)
    return AuxStats(
        p1_bar=float(np.mean(p1)),
        p2_bar=float(np.mean(p2)),
        rc_bar=float(np.mean(rc)),
        rs_bar=float(np.mean(rs)),
        n=block.n,
    )


def write_block_csv(block: IQBlock, path) -> None:
    """Dump a block as CSV with columns index, i1, q1, i2, q2."""
    with open(path, "w", newline="") as fh:
        fh.write("index,i1,q1,i2,q2\n")
        for j in range(block.n):
            fh.write(
                f"{j},{block.i1[j]:.12g},{block.q1[j]:.12g},"
                f"{block.i2[j]:.12g},{block.q2[j]:.12g}\n"
            )
