"""Command-line entry point.

Every output file starts with provenance metadata (tool version, command and
all parameters, including the seed) so it can be regenerated exactly.  CSV
files carry it on a leading ``#`` comment line holding a JSON object.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import EntBoundsError
from .oracle import (
    check_brute_min,
    check_curve_shape,
    check_lemma1,
    check_lemma2,
    check_lemma34,
    check_mixed_segment,
    check_theorem1,
)
from .sampling import scan
from .spectra import make_spectrum
from .states import schmidt
from .thermal import bound_curve, e_max, e_min, format_value, max_state, min_state
from .twoqubit import closed_bounds, entropy_from_purity

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
OUTPUT_DIR_ENV = "ENTBOUNDS_OUTPUT_DIR"
REF_A, REF_B = "0,2,4", "0,1,6,9"
SUITES = ("lemma1", "lemma2", "lemma34", "theorem1", "curve", "mixed", "brute")
TWOQUBIT_RESIDUAL_TOL = 1e-10

# per-command defaults, applied after the config file
DEFAULTS = {
    "bounds": {"points": 200, "format": "csv"},
    "state": {"kind": "min"},
    "sample": {"n": 100_000, "bins": "200x200", "seed": 0, "block_size": 1 << 16,
               "workers": 1, "format": "csv"},
    "verify": {"trials": 10_000, "mixed_trials": 1000, "seed": 0, "tol": 1e-9,
               "points": 1000, "brute_values": 10, "brute_resolution": 1e-4,
               "spec_a": REF_A, "spec_b": REF_B, "format": "json"},
    "twoqubit": {"spec_a": "0,1", "spec_b": "0,1", "points": 1001, "format": "csv"},
}


class UsageError(Exception):
    pass


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _parse_bins(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in str(text).lower().split("x"))
    except ValueError:
        raise UsageError(f"--bins: expected NxM, got {text!r}") from None
    if n < 1 or m < 1:
        raise UsageError("--bins: both counts must be positive")
    return n, m


def load_config(path: str) -> dict:
    """Read ``key = value`` lines (``#`` comments allowed, no sections)."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = lambda k: k.strip().replace("-", "_")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"bad config file {path}: {exc}") from None
    return dict(parser["run"])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entbounds", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spectra=True, fmt=True):
        sp.add_argument("--config", help="key = value file; flags override it")
        sp.add_argument("--output", "-o", help="output file (default: stdout or $%s)" % OUTPUT_DIR_ENV)
        if spectra:
            sp.add_argument("--spec-a", dest="spec_a", help="comma-separated levels of H_A")
            sp.add_argument("--spec-b", dest="spec_b", help="comma-separated levels of H_B")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"))

    sp = sub.add_parser("bounds", help="minimum and maximum energy curves")
    common(sp)
    sp.add_argument("--points", type=int, help="samples on the solvable part of each curve")

    sp = sub.add_parser("state", help="an extremal state as JSON")
    common(sp, fmt=False)
    sp.add_argument("--kind", choices=("min", "max"))
    sp.add_argument("--entanglement", type=float, help="entropy of entanglement in nats")
    sp.add_argument("--phases", help="comma-separated phases, one per Schmidt term")

    sp = sub.add_parser("sample", help="Haar-random energy/entanglement histogram")
    common(sp)
    sp.add_argument("--n", type=int, help="number of samples")
    sp.add_argument("--bins", help="NxM bin counts (entanglement x energy)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--block-size", dest="block_size", type=int)
    sp.add_argument("--workers", type=int)

    sp = sub.add_parser("verify", help="run the randomized and brute-force checks")
    common(sp)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--mixed-trials", dest="mixed_trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--points", type=int, help="curve samples for the shape check")
    sp.add_argument("--brute-values", dest="brute_values", type=int)
    sp.add_argument("--brute-resolution", dest="brute_resolution", type=float)
    sp.add_argument("--only", action="append", choices=SUITES, help="run only this suite (repeatable)")

    sp = sub.add_parser("twoqubit", help="closed-form two-qubit table against the solver")
    common(sp)
    sp.add_argument("--points", type=int, help="uniform purity grid size on [1/2, 1]")
    sp.add_argument("--purity", help="comma-separated purity values (overrides --points)")
    return p


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < flags."""
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        cfg.update(load_config(args.config))
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "command"):
            cfg[k] = v
    return cfg


def _int(cfg, key, minimum=None) -> int:
    try:
        v = int(cfg[key])
    except KeyError:
        raise UsageError(f"missing --{key.replace('_', '-')}") from None
    except ValueError:
        raise UsageError(f"--{key.replace('_', '-')} must be an integer") from None
    if minimum is not None and v < minimum:
        raise UsageError(f"--{key.replace('_', '-')} must be >= {minimum}")
    return v


def _float(cfg, key) -> float:
    try:
        return float(cfg[key])
    except KeyError:
        raise UsageError(f"missing --{key.replace('_', '-')}") from None
    except ValueError:
        raise UsageError(f"--{key.replace('_', '-')} must be a number") from None


def _spectra(cfg):
    for key in ("spec_a", "spec_b"):
        if key not in cfg:
            raise UsageError(f"missing --{key.replace('_', '-')}")
    a = make_spectrum(_parse_floats(cfg["spec_a"], "--spec-a"))
    b = make_spectrum(_parse_floats(cfg["spec_b"], "--spec-b"))
    return a, b


def _metadata(command: str, params: dict) -> dict:
    return {"tool": "entbounds", "version": __version__, "command": command, "parameters": params}


def _csv_text(metadata: dict, header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _finite(obj):
    """Replace non-finite floats (skipped checks, absent residuals) by None."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _json_text(obj) -> str:
    return json.dumps(_finite(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, cfg: dict, command: str, ext: str) -> None:
    path: Optional[Path] = None
    if cfg.get("output"):
        path = Path(cfg["output"])
    elif os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / f"{command}.{ext}"
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _none_if_nan(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


def cmd_bounds(cfg: dict) -> int:
    a, b = _spectra(cfg)
    points = _int(cfg, "points", minimum=2)
    curves = {kind: bound_curve(a, b, kind, points) for kind in ("min", "max")}
    meta = _metadata("bounds", {"spec_a": list(a.levels), "spec_b": list(b.levels), "points": points})
    fmt = cfg.get("format", "csv")
    if fmt == "json":
        _emit(_json_text({"metadata": meta, **{k: c.rows() for k, c in curves.items()}}), cfg, "bounds", "json")
        return EXIT_OK
    header = ["kind", "entanglement_nats", "entanglement_normalized", "beta", "energy", "energy_normalized"]
    rows = [[kind] + list(r.values()) for kind, c in curves.items() for r in c.rows()]
    _emit(_csv_text(meta, header, rows), cfg, "bounds", "csv")
    return EXIT_OK


def cmd_state(cfg: dict) -> int:
    a, b = _spectra(cfg)
    kind = cfg.get("kind", "min")
    if kind not in ("min", "max"):
        raise UsageError("--kind must be min or max")
    ent = _float(cfg, "entanglement")
    phases = _parse_floats(cfg["phases"], "--phases") if cfg.get("phases") else None
    build, extremum = (min_state, e_min) if kind == "min" else (max_state, e_max)
    state = build(a, b, ent, phases)
    energy, beta = extremum(a, b, ent)
    params = {"spec_a": list(a.levels), "spec_b": list(b.levels), "kind": kind,
              "entanglement": ent, "phases": phases}
    out = {
        "metadata": _metadata("state", params),
        "kind": kind,
        "entanglement": ent,
        "beta": beta,
        "energy": energy,
        "schmidt_lambdas": list(schmidt(state).lambdas),
        "state": state.to_dict(),
    }
    _emit(_json_text(out), cfg, "state", "json")
    return EXIT_OK


def cmd_sample(cfg: dict) -> int:
    a, b = _spectra(cfg)
    n = _int(cfg, "n", minimum=1)
    bins = _parse_bins(cfg["bins"])
    seed = _int(cfg, "seed")
    block = _int(cfg, "block_size", minimum=1)
    workers = _int(cfg, "workers", minimum=1)
    hist = scan(a, b, n, bins, seed, block_size=block, workers=workers)
    summary = {k: _none_if_nan(v) for k, v in hist.summary().items()}
    # worker count does not affect results, so it is not part of provenance
    params = {"spec_a": list(a.levels), "spec_b": list(b.levels), "n_samples": n,
              "bins": list(bins), "seed": seed, "block_size": block}
    meta = _metadata("sample", params)
    meta["summary"] = summary
    if cfg.get("format", "csv") == "json":
        _emit(_json_text({"metadata": meta, "counts": hist.counts.tolist()}), cfg, "sample", "json")
    else:
        n_bins, m_bins = bins
        rows = ([i, j, int(hist.counts[i, j])] for i in range(n_bins) for j in range(m_bins))
        _emit(_csv_text(meta, ["bin_x", "bin_y", "count"], rows), cfg, "sample", "csv")
    print(f"samples={n} bound_violations={summary['bound_violations']} "
          f"near_bound_fraction={summary['near_bound_fraction']:.3g}", file=sys.stderr)
    return EXIT_OK if summary["bound_violations"] == 0 else EXIT_FAIL


def cmd_verify(cfg: dict) -> int:
    trials = _int(cfg, "trials", minimum=1)
    mixed_trials = _int(cfg, "mixed_trials", minimum=1)
    seed = _int(cfg, "seed")
    tol = _float(cfg, "tol")
    if not tol > 0:
        raise UsageError("--tol must be positive")
    points = _int(cfg, "points", minimum=5)
    a, b = _spectra(cfg)
    only = cfg.get("only") or list(SUITES)
    if isinstance(only, str):
        only = [s.strip() for s in only.split(",")]
    unknown = set(only) - set(SUITES)
    if unknown:
        raise UsageError(f"--only: unknown suites {sorted(unknown)}")

    suites = {
        "lemma1": lambda: check_lemma1(trials, seed, tol),
        "lemma2": lambda: check_lemma2(trials, seed, tol),
        "lemma34": lambda: check_lemma34(trials, seed, tol),
        "theorem1": lambda: check_theorem1(trials, seed, tol),
        "curve": lambda: check_curve_shape(a, b, points, tol),
        "mixed": lambda: check_mixed_segment(mixed_trials, seed, a, b, tol),
        "brute": lambda: check_brute_min(a, b, _int(cfg, "brute_values", minimum=1),
                                         _float(cfg, "brute_resolution")),
    }
    reports = [suites[name]() for name in SUITES if name in only]

    print(f"{'check':<14}{'trials':>8}{'violations':>12}{'worst_margin':>16}  status")
    for r in reports:
        print(f"{r.name:<14}{r.trials:>8}{r.violations:>12}{r.worst_margin:>16.3e}  "
              f"{'PASS' if r.passed else 'FAIL'}")
    params = {"spec_a": list(a.levels), "spec_b": list(b.levels), "trials": trials,
              "mixed_trials": mixed_trials, "seed": seed, "tol": tol, "points": points,
              "suites": [r.name for r in reports]}
    if cfg.get("output") or os.environ.get(OUTPUT_DIR_ENV):
        meta = _metadata("verify", params)
        if cfg.get("format", "json") == "csv":
            header = ["name", "trials", "violations", "worst_margin", "seed"]
            rows = [[r.name, r.trials, r.violations, r.worst_margin, r.seed] for r in reports]
            _emit(_csv_text(meta, header, rows), cfg, "verify", "csv")
        else:
            _emit(_json_text({"metadata": meta, "reports": [r.to_dict() for r in reports]}),
                  cfg, "verify", "json")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_twoqubit(cfg: dict) -> int:
    a, b = _spectra(cfg)
    if a.dimension != 2 or b.dimension != 2:
        raise UsageError("twoqubit needs two-level spectra")
    if cfg.get("purity"):
        grid = _parse_floats(cfg["purity"], "--purity")
        bad = [P for P in grid if not 0.5 <= P <= 1.0]
        if bad:
            raise UsageError(f"--purity values outside [1/2, 1]: {bad}")
    else:
        grid = [float(x) for x in np.linspace(0.5, 1.0, _int(cfg, "points", minimum=2))]

    rows, worst = [], 0.0
    for P in grid:
        cb = closed_bounds(a, b, P)
        ent = entropy_from_purity(P)
        lo, beta = e_min(a, b, ent)
        hi, beta_p = e_max(a, b, ent)
        res = max(abs(lo - cb.e_min), abs(hi - cb.e_max))
        for x in (beta, beta_p):
            if (x is None) != (cb.beta is None):
                res = math.inf
            elif x is not None:
                res = max(res, abs(x - cb.beta))
        worst = max(worst, res)
        rows.append([P, cb.lam, cb.beta, ent, cb.e_min, cb.e_max, beta, beta_p, lo, hi, res])

    header = ["purity", "lambda", "beta", "entanglement", "e_min", "e_max",
              "numeric_beta", "numeric_beta_prime", "numeric_e_min", "numeric_e_max", "residual"]
    params = {"spec_a": list(a.levels), "spec_b": list(b.levels), "purity": grid}
    meta = _metadata("twoqubit", params)
    meta["max_residual"] = worst if math.isfinite(worst) else None
    if cfg.get("format", "csv") == "json":
        _emit(_json_text({"metadata": meta, "columns": header, "rows": rows}), cfg, "twoqubit", "json")
    else:
        _emit(_csv_text(meta, header, rows), cfg, "twoqubit", "csv")
    return EXIT_OK if worst <= TWOQUBIT_RESIDUAL_TOL else EXIT_FAIL


COMMANDS = {
    "bounds": cmd_bounds,
    "state": cmd_state,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "twoqubit": cmd_twoqubit,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"entbounds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EntBoundsError as exc:
        print(f"entbounds {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"entbounds {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
