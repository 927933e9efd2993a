"""Command line interface.

Data go to ``--out`` (standard output by default), diagnostics to standard
error. Exit status: 0 success, 2 domain error, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .core import (
    F_asymptotic_large_rho,
    evaluate,
    theta_hat,
)
from .errors import ConvergenceError, DomainError
from .gbm import density_asym, density_numeric, rate_J
from .reference import theta_gerhold, theta_numeric
from .saddle import Branch, classify, solve_u0

SCHEMA_VERSION = "1"

TABLE1_T = (0.1, 0.2, 0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 10.0)
TABLE1_R = 0.5
NUMERIC_T_FLOOR = 0.2


@dataclass
class OutputRecord:
    command: str
    inputs: Dict[str, Any]
    columns: List[str]
    rows: List[tuple] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def add_row(self, *cells):
        if len(cells) != len(self.columns):
            raise ValueError(f"row has {len(cells)} cells, expected {len(self.columns)}")
        clean = []
        for name, cell in zip(self.columns, cells):
            if isinstance(cell, float) and math.isnan(cell):
                self.flags.append(f"nan: row {len(self.rows)} column {name}")
                cell = None
            clean.append(cell)
        self.rows.append(tuple(clean))


# -- formatting ----------------------------------------------------------------------


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_cell(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return repr(v)
        if v != 0.0 and abs(math.log10(abs(v))) > 300:
            return repr(v)
    return v


def to_csv(rec: OutputRecord) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version: {rec.schema_version}\n")
    buf.write(f"# command: {rec.command}\n")
    for k, v in rec.inputs.items():
        buf.write(f"# input {k}: {v}\n")
    for flag in rec.flags:
        buf.write(f"# flag: {flag}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rec.columns)
    for row in rec.rows:
        w.writerow([_csv_cell(c) for c in row])
    return buf.getvalue()


def to_json(rec: OutputRecord) -> str:
    obj = {
        "schema_version": rec.schema_version,
        "command": rec.command,
        "inputs": rec.inputs,
        "columns": rec.columns,
        "rows": [[_json_cell(c) for c in row] for row in rec.rows],
        "flags": rec.flags,
    }
    return json.dumps(obj, indent=1) + "\n"


def read_csv(text: str):
    """Parse CSV output back into ``(comments, columns, rows)``; numeric cells become floats."""
    comments = []
    body = []
    for line in text.splitlines():
        (comments if line.startswith("#") else body).append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for raw in reader:
        row = []
        for cell in raw:
            if cell == "":
                row.append(None)
                continue
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(tuple(row))
    return comments, columns, rows


# -- grids ---------------------------------------------------------------------------


def parse_grid(spec: str) -> List[float]:
    """``start:stop:count:log|lin`` or a comma-separated list."""
    if ":" not in spec:
        try:
            return [float(x) for x in spec.split(",") if x.strip()]
        except ValueError:
            raise DomainError(f"bad grid {spec!r}") from None
    parts = spec.split(":")
    if len(parts) != 4 or parts[3] not in ("log", "lin"):
        raise DomainError(f"bad grid {spec!r}; expected start:stop:count:log|lin")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"bad grid {spec!r}") from None
    if count < 1:
        raise DomainError(f"grid count must be >= 1 in {spec!r}")
    if parts[3] == "log":
        if not (start > 0 and stop > 0):
            raise DomainError(f"log grid needs positive ends in {spec!r}")
        return list(np.geomspace(start, stop, count))
    return list(np.linspace(start, stop, count))


def _positive(name, v):
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"{name} must be positive, got {v!r}")


# -- commands ------------------------------------------------------------------------


def cmd_theta(r: float, t: float, method: str = "all", tol: float = 1e-10) -> OutputRecord:
    _positive("r", r)
    _positive("t", t)
    methods = ["asym", "asym2", "gerhold", "numeric"] if method == "all" else [method]
    rec = OutputRecord(
        "theta",
        {"r": r, "t": t, "method": method, "tol": tol},
        ["method", "value", "error_bound", "abs_err_est", "valid"],
    )
    for m in methods:
        if m in ("asym", "asym2"):
            th = theta_hat(r, t, with_subleading=(m == "asym2"))
            rec.add_row(m, th.value, th.error_bound, None, None)
        elif m == "gerhold":
            g = theta_gerhold(r, t)
            if not g.valid:
                rec.flags.append(f"domain-invalid: gerhold needs t < t_max = {g.t_max!r}")
            rec.add_row(m, g.value, None, None, g.valid)
        elif m == "numeric":
            q = theta_numeric(r, t, tol=tol)
            if q.precision_loss:
                if method == "numeric":
                    raise ConvergenceError(f"precision loss: {q.digits_lost:.1f} digits cancelled")
                rec.flags.append(f"precision-loss: numeric lost {q.digits_lost:.1f} digits")
                rec.add_row(m, None, None, None, None)
            else:
                if not q.converged:
                    rec.flags.append(f"not-converged: numeric abs_err_est={q.abs_err_est!r}")
                rec.add_row(m, q.value, None, q.abs_err_est, None)
        else:
            raise DomainError(f"unknown method {m!r}")
    return rec


def cmd_table1(tol: float = 1e-10) -> OutputRecord:
    rec = OutputRecord(
        "table1",
        {"r": TABLE1_R, "tol": tol},
        ["t", "rho", "x1_or_y1", "F", "theta_hat", "u0", "theta_G", "theta_num"],
    )
    for t in TABLE1_T:
        rho = TABLE1_R * t
        br = classify(rho)
        root = 0.0 if br.branch is Branch.NEAR_ONE else br.root
        ev = evaluate(rho)
        th = theta_hat(TABLE1_R, t)
        g = theta_gerhold(TABLE1_R, t)
        if not g.valid:
            rec.flags.append(f"domain-invalid: theta_G at t={t!r}")
        q = theta_numeric(TABLE1_R, t, tol=tol)
        num = q.value
        if q.precision_loss:
            rec.flags.append(f"precision-loss: theta_num at t={t!r}")
            num = None
        rec.add_row(t, rho, root, ev.F, th.value, g.u0, g.value, num)
    return rec


def cmd_density(a_grid: str, mu: float, t: float, method: str = "asym", tol: float = 1e-10) -> OutputRecord:
    _positive("t", t)
    grid = parse_grid(a_grid)
    for a in grid:
        _positive("a", a)
    cols = ["a", "J", "g", "log_density", "density"]
    if method == "quadrature":
        cols += ["density_quadrature", "rel_gap"]
    elif method != "asym":
        raise DomainError(f"unknown method {method!r}")
    rec = OutputRecord("density", {"a_grid": a_grid, "mu": mu, "t": t, "method": method, "tol": tol}, cols)
    for a in grid:
        p = density_asym(a, mu, t)
        row = [a, p.J_val, p.g_val, p.log_density, p.density]
        if method == "quadrature":
            dq = density_numeric(a, mu, t, tol=tol)
            row += [dq, dq / p.density - 1.0]
        rec.add_row(*row)
    return rec


def cmd_errorsweep(r_grid: str, t_grid: str, tol: float = 1e-10) -> OutputRecord:
    rs = parse_grid(r_grid)
    ts = parse_grid(t_grid)
    for r in rs:
        _positive("r", r)
    for t in ts:
        if not t >= NUMERIC_T_FLOOR:
            raise DomainError(f"errorsweep needs t >= {NUMERIC_T_FLOOR}, got {t!r}")
    rec = OutputRecord(
        "errorsweep",
        {"r_grid": r_grid, "t_grid": t_grid, "tol": tol},
        ["r", "t", "rho", "theta_hat", "theta_num", "observed", "bound", "pass"],
    )
    for r in rs:
        for t in ts:
            th = theta_hat(r, t).value
            q = theta_numeric(r, t, tol=tol)
            if q.precision_loss:
                rec.flags.append(f"precision-loss: r={r!r} t={t!r}")
                rec.add_row(r, t, r * t, th, None, None, t / 70.0, None)
                continue
            observed = q.value / th - 1.0
            bound = t / 70.0
            rec.add_row(r, t, r * t, th, q.value, observed, bound, abs(observed) <= bound + 10.0 * tol)
    return rec


FIGURES = ("F", "G", "g2tilde", "theta_vs_t")


def cmd_plotdata(figure: str, grid: Optional[str] = None) -> OutputRecord:
    if figure not in FIGURES:
        raise DomainError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    if figure == "theta_vs_t":
        ts = parse_grid(grid or "0.05:10:200:log")
        rec = OutputRecord(
            "plotdata", {"figure": figure, "grid": grid}, ["r", "t", "theta_hat", "band_lo", "band_hi"]
        )
        for r in (0.5, 1.0, 1.5):
            for t in ts:
                th = theta_hat(r, t)
                rec.add_row(r, t, th.value, th.value * (1.0 - th.error_bound), th.value * (1.0 + th.error_bound))
        return rec
    rhos = parse_grid(grid or "0.01:10:300:log")
    if figure == "F":
        rec = OutputRecord("plotdata", {"figure": figure, "grid": grid}, ["rho", "F", "F_large_rho", "asymptote"])
        for rho in rhos:
            rec.add_row(rho, evaluate(rho).F, F_asymptotic_large_rho(rho), rho)
    elif figure == "G":
        rec = OutputRecord("plotdata", {"figure": figure, "grid": grid}, ["rho", "G"])
        for rho in rhos:
            rec.add_row(rho, evaluate(rho).G)
    else:
        rec = OutputRecord("plotdata", {"figure": figure, "grid": grid}, ["rho", "g2tilde"])
        for rho in rhos:
            rec.add_row(rho, evaluate(rho).g2t)
    return rec


# -- argument parsing ----------------------------------------------------------------


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("csv", "json"), default=default("csv"))
    parser.add_argument("--tol", type=float, default=default(1e-10))
    parser.add_argument("--out", default=default(None), help="output path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartman-watson", description="Hartman-Watson integral toolkit")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", parents=[common], help="evaluate theta(r, t)")
    p.add_argument("-r", type=float, required=True)
    p.add_argument("-t", type=float, required=True)
    p.add_argument("--method", choices=("asym", "asym2", "gerhold", "numeric", "all"), default="all")

    sub.add_parser("table1", parents=[common], help="reproduce the r=0.5 comparison table")

    p = sub.add_parser("density", parents=[common], help="small-t density of the GBM time average")
    p.add_argument("--a-grid", default="0.25:4:41:log")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("-t", "--t", dest="t", type=float, default=0.1)
    p.add_argument("--method", choices=("asym", "quadrature"), default="asym")

    p = sub.add_parser("errorsweep", parents=[common], help="observed error against the t/70 bound")
    p.add_argument("--r-grid", default="0.5,1.0,1.5")
    p.add_argument("--t-grid", default="0.2,0.3,0.5,1.0,2.0,3.0")

    p = sub.add_parser("plotdata", parents=[common], help="curve data for F, G, g2tilde, theta vs t")
    p.add_argument("--figure", required=True)
    p.add_argument("--grid", default=None, help="start:stop:count:log|lin")
    return parser


def run(args: argparse.Namespace) -> OutputRecord:
    if not args.tol > 0:
        raise DomainError(f"--tol must be positive, got {args.tol!r}")
    if args.command == "theta":
        return cmd_theta(args.r, args.t, args.method, args.tol)
    if args.command == "table1":
        return cmd_table1(args.tol)
    if args.command == "density":
        return cmd_density(args.a_grid, args.mu, args.t, args.method, args.tol)
    if args.command == "errorsweep":
        return cmd_errorsweep(args.r_grid, args.t_grid, args.tol)
    return cmd_plotdata(args.figure, args.grid)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rec = run(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for flag in rec.flags:
        print(f"warning: {flag}", file=sys.stderr)
    text = to_json(rec) if args.format == "json" else to_csv(rec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
