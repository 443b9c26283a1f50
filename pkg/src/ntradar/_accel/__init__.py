"""Kernel backend selection.

The hot sampling loops exist in two interchangeable lanes: a compiled Cython
extension (``_kernel``) and a pure-python/numpy fallback (``pykernel``).  Both
implement the identical algorithm; outputs agree to floating-point tolerance
(last-ulp differences in transcendental functions aside) and each lane is
bit-deterministic given (seed, stream).

Selection happens at import: the compiled lane is used when importable unless
the ``NTRADAR_BACKEND`` environment variable forces a lane ("compiled",
"python", or "auto").
"""

from __future__ import annotations

import os

from . import pykernel

try:
    from . import _kernel
except ImportError:  # extension not built: numpy lane only
    _kernel = None

_LANES = {"python": pykernel}
if _kernel is not None:
    _LANES["compiled"] = _kernel


def available_lanes() -> tuple[str, ...]:
    return tuple(sorted(_LANES))


def get_lane(name: str = "auto"):
    """Return a kernel lane module by name ("auto" prefers compiled)."""
    if name == "auto":
        return _LANES.get("compiled", pykernel)
    try:
        return _LANES[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(available_lanes())}"
        ) from None


_requested = os.environ.get("NTRADAR_BACKEND", "auto")
kernel = get_lane(_requested)
backend_name = kernel.name

philox_raw = kernel.philox_raw
normals = kernel.normals
sample_quads = kernel.sample_quads
aux_mean_batch = kernel.aux_mean_batch
