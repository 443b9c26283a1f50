"""Pure-python (numpy) lane of the sampling kernel.

Implements exactly the same algorithm as the compiled lane in ``_kernel.pyx``:

* Philox4x32-10 counter-based generator, keyed by a 64-bit seed, with the
  128-bit counter split into (block index, stream id).  Distinct streams are
  statistically independent, so trials can be distributed over any number of
  workers without changing results.
* Each 128-bit output block yields two uint64 words, mapped to uniforms on
  (0, 1] via ``((w >> 11) + 1) * 2**-53``.
* Marsaglia polar transform: a block gives one candidate pair (2u-1, 2v-1),
  accepted when 0 < s < 1 with s the squared radius; an accepted block yields
  two standard normals.  Blocks are consumed strictly in counter order, so the
  normal stream is identical in both lanes up to last-ulp differences in log().
* Correlated I/Q quadruples: x = A z with A a 4x4 factor of the covariance
  matrix (A @ A.T = Sigma), consuming four normals per sample.

The per-trial aggregation returns means of (P1, P2, Rc, Rs) where
P1 = i1^2 + q1^2, P2 = i2^2 + q2^2, Rc = i1*i2 + sign*q1*q2 and
Rs = i1*q2 - sign*i2*q1 (sign +1 for the rotation variant, -1 for reflection).
"""

from __future__ import annotations

import numpy as np

name = "python"

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = 0xFFFFFFFFFFFFFFFF

# one polar attempt per block succeeds w.p. pi/4; 1.35 gives ~4 sigma headroom
_CHUNK_BLOCKS = 1 << 15
_OVERDRAW = 1.35


def _philox_blocks(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Raw Philox4x32-10 output for ``count`` consecutive blocks.

    Returns a (count, 4) uint32 array; row b is the output for counter value
    ``start + b`` on the given (seed, stream).
    """
    blk = (np.uint64(start & _MASK64) + np.arange(count, dtype=np.uint64))
    c0 = (blk & _MASK32).astype(np.uint32)
    c1 = (blk >> np.uint64(32)).astype(np.uint32)
    c2 = np.full(count, (stream & 0xFFFFFFFF), dtype=np.uint32)
    c3 = np.full(count, ((stream >> 32) & 0xFFFFFFFF), dtype=np.uint32)
    # round r uses key + r * Weyl (mod 2^32); precomputed to stay in uint32
    keys = [
        (
            np.uint32((seed + r * 0x9E3779B9) & 0xFFFFFFFF),
            np.uint32(((seed >> 32) + r * 0xBB67AE85) & 0xFFFFFFFF),
        )
        for r in range(10)
    ]
    for k0, k1 in keys:
        p0 = c0.astype(np.uint64) * _M0
        p1 = c2.astype(np.uint64) * _M1
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = (p0 & _MASK32).astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = (p1 & _MASK32).astype(np.uint32)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=1)


def philox_raw(seed: int, stream: int, nblocks: int, block_start: int = 0) -> np.ndarray:
    """Flat uint32 view of ``nblocks`` Philox blocks (test hook)."""
    return _philox_blocks(seed, stream, block_start, nblocks).ravel()


def _uniform_pairs(blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map (n, 4) uint32 blocks to two (0, 1] uniform arrays."""
    b64 = blocks.astype(np.uint64)
    wa = b64[:, 0] | (b64[:, 1] << np.uint64(32))
    wb = b64[:, 2] | (b64[:, 3] << np.uint64(32))
    scale = 2.0 ** -53
    u = ((wa >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * scale
    v = ((wb >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * scale
    return u, v


class _NormalStream:
    """Sequential standard-normal stream for one (seed, stream) pair."""

    def __init__(self, seed: int, stream: int):
        self._seed = seed
        self._stream = stream
        self._next_block = 0
        self._leftover = np.empty(0, dtype=np.float64)

    def take(self, count: int) -> np.ndarray:
        parts = []
        have = self._leftover.size
        if have:
            parts.append(self._leftover[:count])
        while have < count:
            n_blocks = min(
                _CHUNK_BLOCKS, max(64, int((count - have) / 2 * _OVERDRAW) + 16)
            )
            blocks = _philox_blocks(self._seed, self._stream, self._next_block, n_blocks)
            self._next_block += n_blocks
            u, v = _uniform_pairs(blocks)
            a = 2.0 * u - 1.0
            b = 2.0 * v - 1.0
            s = a * a + b * b
            keep = (s > 0.0) & (s < 1.0)
            a, b, s = a[keep], b[keep], s[keep]
            f = np.sqrt(-2.0 * np.log(s) / s)
            z = np.empty(2 * a.size, dtype=np.float64)
            z[0::2] = a * f
            z[1::2] = b * f
            parts.append(z)
            have += z.size
        flat = parts[0] if len(parts) == 1 else np.concatenate(parts)
        self._leftover = flat[count:]
        return flat[:count]


def normals(seed: int, stream: int, count: int) -> np.ndarray:
    """First ``count`` standard normals of the (seed, stream) sequence."""
    return _NormalStream(seed, stream).take(count)


def _quads_from_normals(z: np.ndarray, factor: np.ndarray) -> tuple[np.ndarray, ...]:
    z = z.reshape(-1, 4)
    cols = []
    for i in range(4):
        # explicit left-to-right sum: same rounding as the compiled lane
        acc = factor[i, 0] * z[:, 0]
        acc = acc + factor[i, 1] * z[:, 1]
        acc = acc + factor[i, 2] * z[:, 2]
        acc = acc + factor[i, 3] * z[:, 3]
        cols.append(acc)
    return tuple(cols)


def sample_quads(factor: np.ndarray, n: int, seed: int, stream: int) -> np.ndarray:
    """n correlated (i1, q1, i2, q2) samples as an (n, 4) array."""
    z = normals(seed, stream, 4 * n)
    return np.stack(_quads_from_normals(z, factor), axis=1)


def aux_mean_batch(
    factor: np.ndarray,
    n: int,
    seed: int,
    stream_base: int,
    trials: int,
    sign: int,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Per-trial means of (P1, P2, Rc, Rs) for ``trials`` independent blocks.

    Trial t draws n samples from stream ``stream_base + t``; the result does
    not depend on how a caller partitions the trial range over workers.
    """
    if out is None:
        out = np.empty((trials, 4), dtype=np.float64)
    sgn = float(sign)
    for t in range(trials):
        z = normals(seed, stream_base + t, 4 * n)
        i1, q1, i2, q2 = _quads_from_normals(z, factor)
        out[t, 0] = np.mean(i1 * i1 + q1 * q1)
        out[t, 1] = np.mean(i2 * i2 + q2 * q2)
        out[t, 2] = np.mean(i1 * i2 + sgn * (q1 * q2))
        out[t, 3] = np.mean(i1 * q2 - sgn * (i2 * q1))
    return out
