"""Command-line front end emitting reproducible CSV/JSON curve data.

Every command writes a data section plus a manifest (embedded for JSON,
a ``<output>.manifest.json`` sidecar for CSV) recording the command, its
full parameter set, the package version, and a SHA-256 digest of the data
section.  Reruns with an equal manifest produce byte-identical data.

Exit codes: 0 success, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
import os
import sys

import click

from . import __version__
from .analytic_perf import (
    RocFamily,
    pd_d0_small_rho,
    pd_rhohat_exact,
    pd_small_rho_marcum,
    required_nrho2,
)
from .detectors import DetectorKind
from .errors import DomainError, InsufficientTrialsError, NumericError
from .logistic_fit import reproduce_tables, table_rows
from .montecarlo import (
    H0_STREAM_BASE,
    H1_STREAM_BASE,
    detector_statistics,
    empirical_threshold,
    estimate_pd,
    calibrate_threshold,
    min_calibration_trials,
)
from .signal_model import SignalParams, Variant, sample_block

_KINDS = {
    "d0": DetectorKind.D0,
    "rhohat": DetectorKind.RHO_HAT,
    "mf": DetectorKind.MATCHED_FILTER,
}

_PAPER_PFAS = "1e-2,1e-4,1e-6,1e-8,1e-10"


def _out_path(path: str) -> str:
    base = os.environ.get("NTRADAR_OUT_DIR", ".")
    return path if os.path.isabs(path) else os.path.join(base, path)


def _parse_floats(text: str, label: str) -> list[float]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise click.UsageError(f"{label} list is empty")
    try:
        return [float(t) for t in items]
    except ValueError as exc:
        raise click.UsageError(f"bad {label} list {text!r}: {exc}") from None


def _parse_ints(text: str, label: str) -> list[int]:
    return [int(v) for v in _parse_floats(text, label)]


def _fmt(v: float) -> str:
    return format(v, ".12g")


def _manifest(command: str, params: dict, data_bytes: bytes) -> dict:
    return {
        "command": command,
        "params": params,
        "version": __version__,
        "data_sha256": hashlib.sha256(data_bytes).hexdigest(),
    }


def _write_csv(path: str, command: str, params: dict, header: str, lines: list[str]) -> None:
    data = header + "\n" + "".join(line + "\n" for line in lines)
    with open(path, "w", newline="") as fh:
        fh.write(data)
    manifest = _manifest(command, params, data.encode())
    with open(path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_json(path: str, command: str, params: dict, data) -> None:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    payload = {
        "manifest": _manifest(command, params, canonical.encode()),
        "data": data,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _guarded(fn):
    """Map library errors onto the CLI exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DomainError, InsufficientTrialsError) as exc:
            raise click.UsageError(str(exc)) from exc
        except NumericError as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(3)

    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """Detection-performance toolkit for noise-type radars."""


@main.command("pd-curve")
@click.option("--family", "families", type=click.Choice(["d0", "marcum"]), multiple=True,
              default=("d0", "marcum"), show_default=True)
@click.option("--pfa", "pfa_text", default=_PAPER_PFAS, show_default=True,
              help="Comma-separated false-alarm probabilities.")
@click.option("--nrho2-start", type=float, default=0.0, show_default=True)
@click.option("--nrho2-stop", type=float, default=45.0, show_default=True)
@click.option("--nrho2-step", type=float, default=0.5, show_default=True)
@click.option("--point", "points", multiple=True,
              help="rho,N pair; may repeat, overrides the nrho2 range.")
@click.option("-o", "--output", default="pd_curve.csv", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@_guarded
def cmd_pd_curve(families, pfa_text, nrho2_start, nrho2_stop, nrho2_step, points,
                 output, fmt):
    """Detection probability vs nrho2 for the small-rho curves."""
    pfas = _parse_floats(pfa_text, "pfa")
    if not families:
        raise click.UsageError("at least one --family is required")
    if points:
        xs = []
        for text in points:
            rho, n = _parse_floats(text, "point")
            if not (0.0 <= rho < 1.0) or n < 1:
                raise click.UsageError(f"bad point {text!r}")
            xs.append(n * rho * rho)
    else:
        if nrho2_step <= 0.0 or nrho2_stop < nrho2_start or nrho2_start < 0.0:
            raise click.UsageError("invalid nrho2 range")
        count = int(math.floor((nrho2_stop - nrho2_start) / nrho2_step + 1e-9)) + 1
        xs = [nrho2_start + i * nrho2_step for i in range(count)]
    rows = []
    for family in families:
        fn = pd_d0_small_rho if family == "d0" else pd_small_rho_marcum
        for pfa in pfas:
            if not (0.0 < pfa < 1.0):
                raise click.UsageError(f"pfa {pfa:g} outside (0, 1)")
            for x in xs:
                rows.append((family, pfa, x, fn(pfa, x)))
    params = {
        "families": list(families), "pfa": pfas, "points": list(points),
        "nrho2_start": nrho2_start, "nrho2_stop": nrho2_stop,
        "nrho2_step": nrho2_step,
    }
    path = _out_path(output)
    if fmt == "csv":
        lines = [f"{f},{_fmt(p)},{_fmt(x)},{_fmt(v)}" for f, p, x, v in rows]
        _write_csv(path, "pd-curve", params, "family,pfa,nrho2,pd", lines)
    else:
        data = [{"family": f, "pfa": p, "nrho2": x, "pd": v} for f, p, x, v in rows]
        _write_json(path, "pd-curve", params, data)
    click.echo(f"wrote {len(rows)} rows to {path}")


@main.command("required")
@click.argument("pd", type=float)
@click.argument("pfa", type=float)
@click.option("--family", type=click.Choice(["d0", "marcum"]), default="marcum",
              show_default=True)
@click.option("--rho", type=float, default=None,
              help="Report the sample count N needed at this correlation.")
@click.option("--rate", type=float, default=None,
              help="Sample rate in Hz; reports the integration time.")
@click.option("--json", "json_out", default=None, help="Also write a JSON result.")
@_guarded
def cmd_required(pd, pfa, family, rho, rate, json_out):
    """Invert the small-rho curve: nrho2 required for a (pd, pfa) pair."""
    if not (0.0 < pfa < pd < 1.0):
        raise click.UsageError(f"need 0 < pfa < pd < 1, got pd={pd!r}, pfa={pfa!r}")
    roc_family = (
        RocFamily.D0_FIRST_ORDER if family == "d0" else RocFamily.RHOHAT_SMALL_RHO
    )
    nrho2 = required_nrho2(pd, pfa, roc_family)
    click.echo(f"required nrho2 = {_fmt(nrho2)}")
    data = {"family": family, "pd": pd, "pfa": pfa, "nrho2": nrho2}
    if rho is not None:
        if not (0.0 < rho < 1.0):
            raise click.UsageError(f"rho must lie in (0, 1), got {rho!r}")
        n = int(math.ceil(nrho2 / (rho * rho)))
        click.echo(f"samples required at rho={_fmt(rho)}: N = {n}")
        data["rho"] = rho
        data["n"] = n
        if rate is not None:
            if rate <= 0.0:
                raise click.UsageError("rate must be positive")
            seconds = n / rate
            click.echo(
                f"integration time at {_fmt(rate)} Hz: "
                f"{_fmt(seconds)} s ({_fmt(seconds * 1e3)} ms)"
            )
            data["rate_hz"] = rate
            data["time_seconds"] = seconds
    if json_out:
        params = {"pd": pd, "pfa": pfa, "family": family, "rho": rho, "rate": rate}
        _write_json(_out_path(json_out), "required", params, data)


@main.command("simulate")
@click.option("--kind", type=click.Choice(sorted(_KINDS)), required=True)
@click.option("--rho", type=float, required=True)
@click.option("--n", type=int, required=True, help="Samples integrated per trial.")
@click.option("--pfa", type=float, required=True)
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=1234, show_default=True)
@click.option("--workers", type=int, default=None)
@click.option("--sigma1", type=float, default=1.0, show_default=True)
@click.option("--sigma2", type=float, default=1.0, show_default=True)
@click.option("--phi", type=float, default=0.0, show_default=True)
@click.option("--variant", type=click.Choice(["rotation", "reflection"]),
              default="rotation", show_default=True)
@click.option("-o", "--output", default="simulate.json", show_default=True)
@_guarded
def cmd_simulate(kind, rho, n, pfa, trials, seed, workers, sigma1, sigma2, phi,
                 variant, output):
    """Calibrate a threshold under the null scene and estimate pd."""
    params = SignalParams(rho=rho, sigma1=sigma1, sigma2=sigma2, phi=phi,
                          variant=Variant(variant))
    det = _KINDS[kind]
    threshold = calibrate_threshold(
        det, params.under_null(), n, pfa, trials, seed, workers
    )
    result = estimate_pd(det, params, n, threshold, trials, seed, workers,
                         pfa_target=pfa)
    cli_params = {
        "kind": kind, "rho": rho, "n": n, "pfa": pfa, "trials": trials,
        "seed": seed, "sigma1": sigma1, "sigma2": sigma2, "phi": phi,
        "variant": variant,
    }
    path = _out_path(output)
    _write_json(path, "simulate", cli_params, result.to_dict())
    click.echo(
        f"pd_hat = {_fmt(result.pd_hat)} +- {_fmt(result.stderr)} "
        f"(threshold {_fmt(threshold)}) -> {path}"
    )


@main.command("fit-tables")
@click.option("-o", "--output", default="logistic_tables.csv", show_default=True)
@click.option("--json", "json_out", default=None, help="Also write JSON rows.")
@_guarded
def cmd_fit_tables(output, json_out):
    """Refit the generalized-logistic parameters for both detector families."""
    rows = table_rows(reproduce_tables())
    lines = [
        f"{r['family']},{_fmt(r['pfa'])},{_fmt(r['shape'])},"
        f"{_fmt(r['rate'])},{_fmt(r['epsilon'])}"
        for r in rows
    ]
    path = _out_path(output)
    _write_csv(path, "fit-tables", {}, "family,pfa,S,k,epsilon", lines)
    if json_out:
        _write_json(_out_path(json_out), "fit-tables", {}, rows)
    click.echo(f"wrote {len(rows)} rows to {path}")


@main.command("large-rho")
@click.option("--kind", type=click.Choice(sorted(_KINDS)), required=True)
@click.option("--rho", type=float, default=0.5, show_default=True)
@click.option("--pfa", "pfa_text", default="1e-2,1e-4", show_default=True)
@click.option("--n", "n_text", default="20,40,80,160", show_default=True,
              help="Comma-separated sample counts.")
@click.option("--trials", type=int, default=1_000_000, show_default=True,
              help="Monte Carlo trials (d0/mf kinds only).")
@click.option("--seed", type=int, default=1234, show_default=True)
@click.option("--workers", type=int, default=None)
@click.option("-o", "--output", default="large_rho.csv", show_default=True)
@_guarded
def cmd_large_rho(kind, rho, pfa_text, n_text, trials, seed, workers, output):
    """Exact / Monte Carlo pd at large rho next to the small-rho prediction."""
    if not (0.0 < rho < 1.0):
        raise click.UsageError(f"rho must lie in (0, 1), got {rho!r}")
    pfas = sorted(_parse_floats(pfa_text, "pfa"))
    ns = _parse_ints(n_text, "n")
    det = _KINDS[kind]
    small_rho = pd_d0_small_rho if kind == "d0" else pd_small_rho_marcum
    rows = []
    for n in ns:
        nrho2 = n * rho * rho
        if kind == "rhohat":
            for pfa in pfas:
                rows.append(
                    (pfa, n, nrho2, pd_rhohat_exact(pfa, rho, n),
                     small_rho(pfa, nrho2), 0.0)
                )
        else:
            for pfa in pfas:
                if trials * pfa < 100.0:
                    raise click.UsageError(
                        f"{trials} trials cannot resolve pfa={pfa:g}; "
                        f"need >= {min_calibration_trials(pfa)}"
                    )
            params = SignalParams(rho=rho)
            h0 = detector_statistics(
                params.under_null(), n, trials, seed, H0_STREAM_BASE, workers
            )[det]
            h0.sort()
            h1 = detector_statistics(
                params, n, trials, seed, H1_STREAM_BASE, workers
            )[det]
            for pfa in pfas:
                thr = empirical_threshold(h0, pfa)
                pd_hat = int((h1 > thr).sum()) / trials
                se = math.sqrt(pd_hat * (1.0 - pd_hat) / trials)
                rows.append((pfa, n, nrho2, pd_hat, small_rho(pfa, nrho2), se))
    params_echo = {
        "kind": kind, "rho": rho, "pfa": pfas, "n": ns,
        "trials": trials, "seed": seed,
    }
    lines = [
        f"{kind},{_fmt(rho)},{_fmt(p)},{n},{_fmt(x)},{_fmt(v)},{_fmt(sr)},{_fmt(se)}"
        for p, n, x, v, sr, se in rows
    ]
    path = _out_path(output)
    _write_csv(path, "large-rho", params_echo,
               "kind,rho,pfa,n,nrho2,pd,pd_small_rho,stderr", lines)
    click.echo(f"wrote {len(rows)} rows to {path}")


@main.command("sample")
@click.option("--rho", type=float, required=True)
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=1234, show_default=True)
@click.option("--stream", type=int, default=0, show_default=True)
@click.option("--sigma1", type=float, default=1.0, show_default=True)
@click.option("--sigma2", type=float, default=1.0, show_default=True)
@click.option("--phi", type=float, default=0.0, show_default=True)
@click.option("--variant", type=click.Choice(["rotation", "reflection"]),
              default="rotation", show_default=True)
@click.option("-o", "--output", default="block.csv", show_default=True)
@_guarded
def cmd_sample(rho, n, seed, stream, sigma1, sigma2, phi, variant, output):
    """Dump one I/Q sample block as CSV."""
    params = SignalParams(rho=rho, sigma1=sigma1, sigma2=sigma2, phi=phi,
                          variant=Variant(variant))
    block = sample_block(params, n, seed, stream)
    lines = [
        f"{j},{_fmt(block.i1[j])},{_fmt(block.q1[j])},"
        f"{_fmt(block.i2[j])},{_fmt(block.q2[j])}"
        for j in range(block.n)
    ]
    cli_params = {
        "rho": rho, "n": n, "seed": seed, "stream": stream, "sigma1": sigma1,
        "sigma2": sigma2, "phi": phi, "variant": variant,
    }
    path = _out_path(output)
    _write_csv(path, "sample", cli_params, "index,i1,q1,i2,q2", lines)
    click.echo(f"wrote {block.n} samples to {path}")


if __name__ == "__main__":
    main()
