"""Command-line front end: ``hillzone <command> POTENTIAL [options]``.

Commands
--------
discriminant  CSV of ``F(lam)`` on a real (or shifted) grid with Wronskian errors
bands         CSV of the band curves ``lam_n(t)``
gaps          JSON gap report with per-index classifications
criteria      JSON report of the Fourier-coefficient criteria
verdict       JSON comparison of the spectral and the coefficient verdicts
report        directory with every JSON above plus plot-ready CSVs

Exit status is 0 unless a configuration or numerical error occurs
(2 and 3 respectively); the error payload is written to stderr as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .criteria import DEFAULT_WINDOW, criteria_report
from .errors import ConfigError, HillzoneError
from .floquet import TOL_ODE, monodromy_many
from .potential import TOL_PT, validate_pt
from .potential_file import load_potential
from .spectrum import BlochSweep, gaps, sequence
from .spectrum.bands import default_truncation
from .spectrum.types import TOL_DOUBLE, TOL_GAP, TOL_REAL

COMMANDS = ("discriminant", "bands", "gaps", "criteria", "verdict", "report")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


@dataclass
class RunConfig:
    potential_path: str
    command: str
    K: int | None = None
    grid_size: int = 128
    n_horizon: int = 12
    n_window: tuple[int, int] = DEFAULT_WINDOW
    s: int | None = None
    assert_asymptotic: bool = False
    lambda_min: float = 0.0
    lambda_max: float = 100.0
    lambda_imag: float = 0.0
    points: int = 101
    tol_ode: float = TOL_ODE
    tol_real: float = TOL_REAL
    tol_double: float = TOL_DOUBLE
    tol_gap: float = TOL_GAP
    tol_pt: float = TOL_PT
    workers: int | None = None
    output_path: str | None = None
    format: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}", "command")
        for name in ("tol_ode", "tol_real", "tol_double", "tol_gap", "tol_pt"):
            v = getattr(self, name)
            if not v > 0:
                raise ConfigError(f"{name} must be positive, got {v}", f"--{name.replace('_', '-')}")
        if self.K is not None and self.K < 8:
            raise ConfigError("K must be at least 8", "--K")
        if self.grid_size < 64:
            raise ConfigError("grid_size must be at least 64", "--grid-size")
        if self.n_horizon < 1:
            raise ConfigError("horizon must be at least 1", "--horizon")
        lo, hi = self.n_window
        if not 1 <= lo < hi:
            raise ConfigError(f"window {lo}:{hi} must satisfy 1 <= lo < hi", "--window")
        if self.points < 1:
            raise ConfigError("points must be positive", "--points")
        if self.lambda_max < self.lambda_min:
            raise ConfigError("lambda-max is below lambda-min", "--lambda-max")
        if self.format not in (None, "csv", "json"):
            raise ConfigError("format must be csv or json", "--format")
        if self.format == "csv" and self.command not in ("discriminant", "bands"):
            raise ConfigError(f"{self.command} emits JSON only", "--format")
        if self.command == "report" and not self.output_path:
            raise ConfigError("report needs an output directory", "--output")


# -- serialization ------------------------------------------------------------

def fmt(x: float) -> str:
    """Fixed 17-significant-digit float formatting for CSV."""
    return format(float(x), ".17g")


def jsonable(obj):
    """Plain JSON data; non-finite floats become ``null``, complex ``[re, im]``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if hasattr(obj, "value"):
        return obj.value
    if hasattr(obj, "__dataclass_fields__"):
        return {k: jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------

def _table(header, rows, fmt_: str | None) -> str:
    if fmt_ == "json":
        return dumps([dict(zip(header, r)) for r in rows])
    return _csv(header, rows)


def discriminant_table(q, cfg: RunConfig):
    lams = np.linspace(cfg.lambda_min, cfg.lambda_max, cfg.points) + 1j * cfg.lambda_imag
    res = monodromy_many(q, lams, cfg.tol_ode, cfg.workers)
    return (["lambda_re", "lambda_im", "F_re", "F_im", "wronskian_err"],
            [(r.lam.real, r.lam.imag, r.discriminant.real, r.discriminant.imag,
              r.wronskian_error) for r in res])


def _sweep(q, cfg: RunConfig) -> BlochSweep:
    K = cfg.K or default_truncation(q, cfg.n_horizon)
    return BlochSweep(q, K, cfg.grid_size, cfg.tol_real, cfg.workers)


def bands_table(q, cfg: RunConfig, sweep=None):
    sweep = sweep or _sweep(q, cfg)
    rows = []
    for n in sorted(sequence(cfg.n_horizon)):
        vals = sweep.band(n)
        rows.extend((n, float(t), float(v.real), float(v.imag)) for t, v in zip(sweep.t, vals))
    return ["n", "t", "lambda_re", "lambda_im"], rows


def intervals_csv(report) -> str:
    return _csv(["n", "kind", "A", "B"],
                [(n, I.kind, "" if I.A is None else float(I.A), "" if I.B is None else float(I.B))
                 for n, I in report.intervals])


def gap_json(report) -> dict:
    return {
        "horizon_N": report.horizon_N,
        "N_est": report.N_est,
        "intervals": [{"n": n, "kind": I.kind, "A": I.A, "B": I.B} for n, I in report.intervals],
        "gaps": [{"left": g.left, "right": g.right, "width": g.width, "between": list(g.between)}
                 for g in report.gaps],
        "finite_zone_spectral": {"verdict": report.verdict.value, "reason": report.reason},
        "classifications": report.classifications,
    }


def criteria_json(rep) -> dict:
    return {
        "s": rep.s,
        "window": list(rep.window),
        "records": [{"n": r.n, "P_n": r.P_n.real, "P_n_imag": r.P_n.imag, "q_n": r.q_n,
                     "q_minus_n": r.q_minus_n, "S_n": r.S_n, "S_minus_n": r.S_minus_n,
                     "Q_0": r.Q_0, "Q_n": r.Q_n, "Q_minus_n": r.Q_minus_n,
                     "leading_term": r.leading_term} for r in rep.records],
        "summary4": {"alpha": rep.alpha,
                     "predictions": [{"n": p.n, "boundary": p.boundary, "p_index": p.p_index,
                                      "P": p.P,
                                      "status": "Applicable" if p.applicable else "Inapplicable",
                                      "predicted_real": p.predicted_real}
                                     for p in rep.summary4]},
        "thm5": rep.thm5,
        "thm6": rep.thm6,
        "thm7": rep.thm7,
        "combined": rep.combined,
        "reason": rep.reason,
        "notes": rep.notes,
    }


AGREEMENT = {
    ("FiniteZone", "FiniteZone"): ("yes", "both routes conclude finite-zone"),
    ("InfiniteZone", "NotConcluded"): ("true-on-nonfinite",
                                       "open gaps persist and no coefficient criterion applies"),
    ("Undetermined", "FiniteZone"): ("conditionally",
                                     "the coefficient route concludes; the spectral route is "
                                     "limited by its horizon and tolerances"),
    ("FiniteZone", "NotConcluded"): ("consistent",
                                     "gaps close up to the horizon; the coefficient criteria are "
                                     "sufficient conditions only and did not apply"),
    ("Undetermined", "NotConcluded"): ("inconclusive", "neither route reaches a conclusion"),
    ("InfiniteZone", "FiniteZone"): ("no", "open gaps persist at the horizon although a "
                                           "coefficient criterion concludes finite-zone"),
}


def compare(spectral: str, algebraic: str) -> dict:
    agree, why = AGREEMENT[(spectral, algebraic)]
    return {"spectral": spectral, "algebraic": algebraic, "agree": agree, "explanation": why}


def verdict_json(q, cfg: RunConfig, gap_report=None, crit=None) -> dict:
    gap_report = gap_report or gaps(q, cfg.n_horizon, cfg.grid_size, cfg.K, cfg.tol_gap,
                                    cfg.tol_double, cfg.tol_real, cfg.workers)
    crit = crit or criteria_report(q, cfg.s, cfg.n_window, cfg.assert_asymptotic)
    out = compare(gap_report.verdict.value, crit.combined)
    out["details"] = {"spectral_reason": gap_report.reason, "algebraic_reason": crit.reason,
                      "horizon_N": gap_report.horizon_N, "N_est": gap_report.N_est,
                      "window": list(crit.window),
                      "thm5": crit.thm5.holds, "thm6": crit.thm6.holds,
                      "thm7": None if crit.thm7 is None else crit.thm7.holds}
    return out


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg.validate()
        q = load_potential(cfg.potential_path)
        pt = validate_pt(q, cfg.tol_pt)
        if cfg.command == "discriminant":
            _write(_table(*discriminant_table(q, cfg), cfg.format), cfg.output_path)
        elif cfg.command == "bands":
            _write(_table(*bands_table(q, cfg), cfg.format), cfg.output_path)
        elif cfg.command == "gaps":
            rep = gaps(q, cfg.n_horizon, cfg.grid_size, cfg.K, cfg.tol_gap, cfg.tol_double,
                       cfg.tol_real, cfg.workers)
            _write(dumps(gap_json(rep)), cfg.output_path)
        elif cfg.command == "criteria":
            _write(dumps(criteria_json(criteria_report(q, cfg.s, cfg.n_window,
                                                       cfg.assert_asymptotic, cfg.tol_pt))),
                   cfg.output_path)
        elif cfg.command == "verdict":
            _write(dumps(verdict_json(q, cfg)), cfg.output_path)
        else:
            os.makedirs(cfg.output_path, exist_ok=True)
            sweep = _sweep(q, cfg)
            rep = gaps(q, cfg.n_horizon, tol_gap=cfg.tol_gap, tol_double=cfg.tol_double,
                       tol_real=cfg.tol_real, sweep=sweep)
            crit = criteria_report(q, cfg.s, cfg.n_window, cfg.assert_asymptotic, cfg.tol_pt)
            bundle = {"pt": {"is_pt": pt.is_pt, "max_violation": pt.max_violation},
                      "gaps": gap_json(rep), "criteria": criteria_json(crit),
                      "verdict": verdict_json(q, cfg, rep, crit),
                      "config": {"K": sweep.K, "grid_size": cfg.grid_size,
                                 "n_horizon": cfg.n_horizon, "window": list(cfg.n_window)}}
            out = cfg.output_path
            _write(dumps(bundle), os.path.join(out, "report.json"))
            _write(_csv(*bands_table(q, cfg, sweep)), os.path.join(out, "bands.csv"))
            _write(intervals_csv(rep), os.path.join(out, "intervals.csv"))
        return EXIT_OK
    except ConfigError as exc:
        sys.stderr.write(dumps(exc.payload()))
        return EXIT_CONFIG
    except ValueError as exc:
        # parameter combinations the library rejects, e.g. a horizon beyond K
        sys.stderr.write(dumps({"error": "ConfigError", "module": "cli", "message": str(exc)}))
        return EXIT_CONFIG
    except HillzoneError as exc:
        sys.stderr.write(dumps(exc.payload()))
        return EXIT_NUMERIC


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hillzone", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("potential", help="potential definition file (YAML)")
        c.add_argument("-o", "--output", default=None,
                       help="output file (directory for report); default stdout")
        c.add_argument("--format", choices=("csv", "json"), default=None)
        c.add_argument("--K", type=int, default=None,
                       help="Galerkin truncation (default max(64, 3N+6), at most half the "
                            "bandwidth of sampled data)")
        c.add_argument("--grid-size", type=int, default=128, help="t-grid size (>= 64)")
        c.add_argument("--horizon", type=int, default=12, help="largest band index N")
        c.add_argument("--window", type=_window, default=DEFAULT_WINDOW, help="criteria window lo:hi")
        c.add_argument("--s", type=int, default=None, help="smoothness index (default from file)")
        c.add_argument("--assert-asymptotic", action="store_true",
                       help="let window evidence of the coefficient criteria conclude")
        c.add_argument("--lambda-min", type=float, default=0.0)
        c.add_argument("--lambda-max", type=float, default=100.0)
        c.add_argument("--lambda-imag", type=float, default=0.0)
        c.add_argument("--points", type=int, default=101)
        for tol, default in (("tol-ode", TOL_ODE), ("tol-real", TOL_REAL),
                             ("tol-double", TOL_DOUBLE), ("tol-gap", TOL_GAP), ("tol-pt", TOL_PT)):
            c.add_argument(f"--{tol}", type=float, default=default)
        c.add_argument("--workers", type=int, default=None)
    return p


def config_from_args(args) -> RunConfig:
    return RunConfig(
        potential_path=args.potential, command=args.command, K=args.K, grid_size=args.grid_size,
        n_horizon=args.horizon, n_window=args.window, s=args.s,
        assert_asymptotic=args.assert_asymptotic, lambda_min=args.lambda_min,
        lambda_max=args.lambda_max, lambda_imag=args.lambda_imag, points=args.points,
        tol_ode=args.tol_ode, tol_real=args.tol_real, tol_double=args.tol_double,
        tol_gap=args.tol_gap, tol_pt=args.tol_pt, workers=args.workers,
        output_path=args.output, format=args.format)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
