"""jurylab command line: closed forms, simulations, comparison tables and checks.

Every command writes one record (CSV or JSON) that embeds the command line,
the resolved configuration, the seed and a timestamp.  Exit codes: 0 ok,
1 usage error, 2 domain error, 3 a theorem check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import __version__, appendix, trio, verify
from .errors import ContractError, DomainError, JuryLabError
from .orderings import make_ordering
from .signal_model import honest_threshold
from .simulation import SimConfig, compare_orderings, default_threads, estimate_reliability

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CHECK_FAILED = 0, 1, 2, 3
FULL_COUNT = 1_000_000
DEFAULT_COUNT = 100_000
WIDE_HALF_WIDTH = 0.01

SCHEMAS = {
    "reliability": ("jurylab.reliability/1",
                    ["scheme", "order", "a1", "a2", "a3", "theta", "reliability", "region", "x", "y1", "y2", "z1", "z2"]),
    "simulate": ("jurylab.simulate/1",
                 ["size", "ordering", "abilities", "nature", "trials", "correct", "estimate", "half_width_90"]),
    "compare": ("jurylab.compare/1",
                ["size", "x_order", "y_order", "n_BB", "n_AA", "n_AB", "n_BA", "R", "R_half_width_90", "flag"]),
    "theorems": ("jurylab.theorems/1",
                 ["check_id", "passed", "points_tested", "violations", "worst_margin", "worst_inputs",
                  "acceptance_rate", "elapsed_ms"]),
    "boundary": ("jurylab.boundary/1", ["kind", "a", "c", "seq_minus_sim", "sign"]),
    "diversity": ("jurylab.diversity/1", ["m", "mu", "a", "b", "c", "branch", "reliability"]),
}


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    schema_version: str
    command: list[str]
    config: dict[str, Any]
    seed: int
    timestamp: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def to_json(self) -> str:
        body = asdict(self)
        body["rows"] = [dict(zip(self.columns, r)) for r in self.rows]
        return json.dumps(body, indent=2, default=_jsonable)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key in ("schema_version", "command", "config", "seed", "timestamp"):
            val = getattr(self, key)
            text = " ".join(val) if key == "command" else (json.dumps(val, sort_keys=True) if key == "config" else val)
            buf.write(f"# {key}: {text}\r\n")
        writer = csv.writer(buf)
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])
        return buf.getvalue()


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def timestamp() -> str:
    """UTC timestamp; SOURCE_DATE_EPOCH pins it for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.isoformat(timespec="seconds").replace("+00:00", "Z")


# --- argument parsing ----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated decimals, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text: str) -> tuple[str, str]:
    parts = text.upper().split(":")
    if len(parts) != 2 or not all(p in ("SO", "AO", "ADO") for p in parts):
        raise argparse.ArgumentTypeError("pair must look like X:Y with X, Y in SO, AO, ADO")
    return parts[0], parts[1]


def _mu_range(text: str) -> tuple[float, float, float]:
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("mu range must be lo:hi:step")
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("mu range needs lo <= hi and step > 0")
    return lo, hi, step


def _seed(text: str) -> int:
    s = int(text)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return s


def _positive_int(text: str) -> int:
    n = int(float(text))
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: csv; json for theorems)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: $JURYLAB_THREADS or 1)")

    p = _Parser(prog="jurylab", description="Sequential jury voting: closed forms, simulation and checks.")
    p.add_argument("--version", action="version", version=f"jurylab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reliability", parents=[common], help="closed-form reliability of a three-juror jury")
    r.add_argument("--abilities", type=_floats, required=True)
    r.add_argument("--scheme", choices=("seq", "sim", "str"), default="seq")
    r.add_argument("--order", choices=("given", "optimal", "all"), default="given")
    r.add_argument("--theta", type=float, default=0.5)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo reliability of one seating")
    s.add_argument("--abilities", type=_floats, required=True)
    s.add_argument("--ordering", choices=("ADO", "SO", "AO", "given"), default="given", type=_rule)
    s.add_argument("--trials", type=_positive_int, default=None)
    s.add_argument("--nature", choices=("A", "B", "symmetric"), default="symmetric")
    s.add_argument("--profile", choices=("default", "paper"), default="default")

    c = sub.add_parser("compare", parents=[common], help="paired comparison of two ordering rules")
    c.add_argument("--sizes", type=_ints, default=[5, 7, 9, 11])
    c.add_argument("--juries", type=_positive_int, default=None)
    c.add_argument("--pair", type=_pair, default=("AO", "SO"),
                   help="X:Y; R is the share of disagreements won by Y")
    c.add_argument("--profile", choices=("default", "paper"), default="default")

    t = sub.add_parser("theorems", parents=[common], help="run the numerical check catalog")
    t.add_argument("--which", default="all", help="'all' or comma-separated check ids")
    t.add_argument("--grid", type=float, default=None, help="grid step for triple grids")
    t.add_argument("--points", type=_positive_int, default=None, help="quasi-random points per sign check")
    t.add_argument("--profile", choices=tuple(verify.PROFILES), default="fast")
    t.add_argument("--list", action="store_true", help="list check ids and exit")

    b = sub.add_parser("boundary", parents=[common], help="sign of Q_seq - Q_sim on the b-slice")
    b.add_argument("--b", type=float, default=0.5)
    b.add_argument("--grid", type=float, default=0.01)

    d = sub.add_parser("diversity", parents=[common], help="optimal-order reliability against heterogeneity")
    d.add_argument("--mean", type=float, required=True)
    d.add_argument("--mu-range", type=_mu_range, default=(1.0, 2.0, 0.01))
    return p


def _rule(text: str) -> str:
    return "given" if text.lower() == "given" else text.upper()


# --- commands -------------------------------------------------------------


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_threads()


def _check_abilities(values: Sequence[float]) -> None:
    for a in values:
        if not 0.0 <= a <= 1.0 or math.isnan(a):
            raise DomainError(f"ability {a} outside [0, 1]")


def cmd_reliability(args) -> tuple[list[list], dict]:
    if len(args.abilities) != 3:
        raise UsageError("closed-form reliability needs exactly three abilities")
    if not 0.0 <= args.theta <= 1.0:
        raise DomainError(f"prior {args.theta} outside [0, 1]")
    _check_abilities(args.abilities)
    given = tuple(args.abilities)
    if args.order == "given":
        orders = [("given", given)]
    elif args.order == "optimal":
        orders = [("optimal", trio.optimal_order(given))]
    else:
        orders = [("perm", p) for p in dict.fromkeys(itertools.permutations(given))]
    rows = []
    for label, (a, b, c) in orders:
        theta = args.theta
        region = ""
        if args.scheme == "seq":
            prof = trio.honest_profile_at(theta, a, b, c)
            value = trio.reliability_sequential_at(theta, a, b, c)
            if theta == 0.5:
                value = trio.reliability_sequential(a, b, c)
                region = trio.classify_region((a, b, c)).value
            th = prof.as_tuple()
        elif args.scheme == "sim":
            value = trio.reliability_simultaneous(theta, a, b, c)
            x, y, z = (float(honest_threshold(theta, v)) for v in (a, b, c))
            th = (x, y, y, z, z)
        else:
            value, prof = trio.optimize_strategic(theta, a, b, c)
            th = prof.as_tuple()
        rows.append([args.scheme, label, a, b, c, theta, float(value), region, *th])
    return rows, {"abilities": list(given), "scheme": args.scheme, "order": args.order, "theta": args.theta}


def cmd_simulate(args) -> tuple[list[list], dict]:
    _check_abilities(args.abilities)
    trials = args.trials or (FULL_COUNT if args.profile == "paper" else DEFAULT_COUNT)
    if len(args.abilities) % 2 == 0:
        raise ContractError("majority voting needs an odd jury size")
    ordering = make_ordering(args.abilities, args.ordering)
    cfg = SimConfig(trials=trials, seed=args.seed, threads=_threads(args), nature=args.nature)
    est = estimate_reliability(ordering, cfg)
    rows = [[len(ordering), ordering.label.value, " ".join(repr(a) for a in ordering.abilities), args.nature,
             trials, est.correct, est.estimate, est.half_width_90]]
    return rows, {"abilities": args.abilities, "ordering": args.ordering, "trials": trials,
                  "nature": args.nature, "profile": args.profile, "block_size": 1 << 16}


def cmd_compare(args) -> tuple[list[list], dict]:
    juries = args.juries or (FULL_COUNT if args.profile == "paper" else DEFAULT_COUNT)
    cfg = SimConfig(trials=juries, seed=args.seed, threads=_threads(args))
    rows = []
    for n in args.sizes:
        if n < 3 or n % 2 == 0:
            raise ContractError(f"jury size {n} must be odd and at least 3")
        tab = compare_orderings(n, juries, args.pair, cfg)
        hw = tab.R_half_width_90
        rows.append([n, tab.x_order, tab.y_order, tab.n_BB, tab.n_AA, tab.n_AB, tab.n_BA, tab.R, hw,
                     "wide" if not hw <= WIDE_HALF_WIDTH else ""])
    return rows, {"sizes": args.sizes, "juries": juries, "pair": ":".join(args.pair), "profile": args.profile}


def cmd_theorems(args) -> tuple[list[list], dict, list[verify.CheckReport]]:
    res = verify.resolve(args.profile)
    if args.grid is not None:
        if not 0 < args.grid <= 0.5:
            raise UsageError("--grid must lie in (0, 0.5]")
        res = replace(res, grid=args.grid)
    if args.points is not None:
        res = replace(res, points=args.points)
    ids = None if args.which == "all" else [w.strip() for w in args.which.split(",") if w.strip()]
    unknown = [w for w in ids or [] if w not in verify.catalog()]
    if unknown:
        raise UsageError(f"unknown check id(s): {', '.join(unknown)}")
    reports = verify.run_all(res, seed=args.seed, threads=_threads(args), which=ids)
    rows = [[r.check_id, r.passed, r.points_tested, r.violations, r.worst_margin,
             " ".join(repr(x) for x in r.worst_inputs), r.acceptance_rate, round(r.elapsed_ms, 3)]
            for r in reports]
    return rows, {"which": args.which, "resolution": asdict(res)}, reports


def _seq_minus_sim(a, b, c):
    return trio.reliability_sequential(b, c, a) - trio.sim_reliability_at(0.5, a, b, c, 0.0, 0.0, 0.0)


def boundary_data(b: float, h: float):
    """Sign grid, refined zero-crossings and the two guaranteed rectangles on the slice b."""
    if not 0.0 < b < 1.0:
        raise DomainError("b must lie in (0, 1)")
    if not 0.0 < h <= 0.5:
        raise DomainError("grid step must lie in (0, 0.5]")
    a_vals = np.linspace(0.0, b, int(round(b / h)) + 1)
    c_vals = np.linspace(b, 1.0, int(round((1 - b) / h)) + 1)
    A, C = np.meshgrid(a_vals, c_vals, indexing="ij")
    D = _seq_minus_sim(A, b, C)
    sign = np.where(np.abs(D) <= 1e-12, 0, np.sign(D)).astype(int)
    grid = [(float(a), float(c), float(d), int(s)) for a, c, d, s in zip(A.ravel(), C.ravel(), D.ravel(), sign.ravel())]
    crossings = set()
    for i, a in enumerate(a_vals):
        for j in range(len(c_vals) - 1):
            if D[i, j] * D[i, j + 1] < 0:
                c0 = brentq(lambda c: _seq_minus_sim(a, b, c), c_vals[j], c_vals[j + 1], xtol=1e-14)
                crossings.add((float(a), float(c0)))
    for j, c in enumerate(c_vals):
        for i in range(len(a_vals) - 1):
            if D[i, j] * D[i + 1, j] < 0:
                a0 = brentq(lambda a: _seq_minus_sim(a, b, c), a_vals[i], a_vals[i + 1], xtol=1e-14)
                crossings.add((float(a0), float(c)))
    crossings |= {(float(a), float(c)) for a, c, s in zip(A.ravel(), C.ravel(), sign.ravel()) if s == 0}
    polyline = [(a, c, float(_seq_minus_sim(a, b, c))) for a, c in sorted(crossings)]
    rects = {
        "rect-homogeneous": (6 * b / 7, b, b, min(7 * b / 6, 1.0)),
        "rect-heterogeneous": (0.0, 3 * b / 4, min(4 * b / 3, 1.0), 1.0),
    }
    return grid, polyline, rects


def cmd_boundary(args) -> tuple[list[list], dict]:
    grid, polyline, rects = boundary_data(args.b, args.grid)
    rows = [["grid", a, c, d, s] for a, c, d, s in grid]
    rows += [["polyline", a, c, d, None] for a, c, d in polyline]
    for name, (a0, a1, c0, c1) in rects.items():
        rows += [[name, a, c, None, None] for a, c in ((a0, c0), (a1, c0), (a1, c1), (a0, c1))]
    return rows, {"b": args.b, "grid": args.grid}


def cmd_diversity(args) -> tuple[list[list], dict]:
    lo, hi, step = args.mu_range
    mus = np.round(np.arange(lo, hi + step / 2, step), 12)
    m = args.mean
    values = trio.diversity_reliability(np.full(mus.shape, m), mus)
    a, b, c = appendix.mean_ability_parametrization(m, mus)
    branch = np.where(appendix.w(m, mus) >= 0, "qbar1", "qbar2")
    rows = [[m, float(u), float(x), float(y), float(z), str(br), float(v)]
            for u, x, y, z, br, v in zip(mus, a, b, c, branch, np.atleast_1d(values))]
    return rows, {"mean": m, "mu_range": list(args.mu_range)}


_COMMANDS = {
    "reliability": cmd_reliability,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "theorems": cmd_theorems,
    "boundary": cmd_boundary,
    "diversity": cmd_diversity,
}


def _emit(record: OutputRecord, args) -> None:
    text = record.to_json() + "\n" if args.format == "json" else record.to_csv()
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "json" if args.command == "theorems" else "csv"
    if args.command == "theorems" and args.list:
        for cid, desc in verify.catalog().items():
            print(f"{cid}\t{desc}")
        return EXIT_OK
    status = EXIT_OK
    try:
        result = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"jurylab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JuryLabError as exc:
        print(f"jurylab {args.command}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    rows, config = result[0], result[1]
    if args.command == "theorems" and not all(r.passed for r in result[2]):
        status = EXIT_CHECK_FAILED
    config["threads"] = _threads(args)
    schema, columns = SCHEMAS[args.command]
    record = OutputRecord(schema, ["jurylab", *argv], config, args.seed, timestamp(), columns, rows)
    if args.command == "theorems" and args.format == "json":
        body = json.loads(record.to_json())
        body["reports"] = [r.to_dict() for r in result[2]]
        body["passed"] = status == EXIT_OK
        text = json.dumps(body, indent=2) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(record, args)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
