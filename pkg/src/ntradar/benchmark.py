"""Throughput benchmark comparing the compiled and pure-python kernel lanes.

Run as ``python -m ntradar.benchmark``.  Reports normal-deviate throughput,
Monte Carlo trial throughput, and the cross-lane agreement of the simulated
statistics (the lanes implement the identical algorithm; differences are
last-ulp transcendental rounding).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._accel import available_lanes, get_lane
from .signal_model import SignalParams, Variant, covariance_factor


def _time(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def run(normal_count: int = 2_000_000, n: int = 4096, trials: int = 128) -> int:
    lanes = available_lanes()
    print(f"available lanes: {', '.join(lanes)}")
    params = SignalParams(rho=0.4, phi=0.3, variant=Variant.ROTATION)
    factor = covariance_factor(params)

    results = {}
    for lane_name in lanes:
        lane = get_lane(lane_name)
        _, _ = _time(lane.normals, 7, 0, 10_000)  # warm up
        _, t_norm = _time(lane.normals, 7, 0, normal_count)
        aux, t_aux = _time(lane.aux_mean_batch, factor, n, 7, 0, trials, 1)
        results[lane_name] = (t_norm, t_aux, aux)
        print(
            f"{lane_name:>9}: {normal_count / t_norm / 1e6:8.1f} M normals/s | "
            f"{trials * n / t_aux / 1e6:8.1f} M samples/s in trial batches "
            f"({t_aux / trials * 1e3:.2f} ms/trial at n={n})"
        )

    if len(lanes) == 2:
        aux_c = results["compiled"][2]
        aux_p = results["python"][2]
        rel = np.max(np.abs(aux_c - aux_p) / np.maximum(np.abs(aux_c), 1e-30))
        speedup = results["python"][1] / results["compiled"][1]
        print(f"cross-lane max relative difference: {rel:.3e}")
        print(f"compiled speedup on trial batches: {speedup:.1f}x")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--normals", type=int, default=2_000_000)
    parser.add_argument("--n", type=int, default=4096)
    parser.add_argument("--trials", type=int, default=128)
    args = parser.parse_args(argv)
    return run(args.normals, args.n, args.trials)


if __name__ == "__main__":
    raise SystemExit(main())
