"""Command-line interface: ``eval``, ``validate``, ``table`` and ``bench``.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .core import (DihedralBesselError, DihedralParams, DomainError, EvalControl, PolarPoint,
                   check_chamber)
from .crosscheck import CrossChecker
from .dihedral import DEFAULT_QUAD_ORDER, dkw, dkw_even_integral, dkw_odd_integral
from .identities import evaluate_case
from .manifest import DEFAULT_SEED, crosscheck_cases, identity_cases, random_chamber_pairs

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
GRID_AXES = ("rho", "phi", "r", "theta")


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


# ------------------------------------------------------------------ parser

def _add_group_flags(p: argparse.ArgumentParser, points: bool = True) -> None:
    p.add_argument("--group", choices=("even", "odd"), required=True)
    p.add_argument("--p", type=int, help="even group: D_2(2p)")
    p.add_argument("--n", type=int, help="odd group: odd n >= 3")
    p.add_argument("--k0", type=float, required=True)
    p.add_argument("--k1", type=float, default=None, help="even group only")
    if points:
        for name in GRID_AXES:
            p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--method", choices=("series", "integral", "auto"), default="auto")
    p.add_argument("--tol", type=float, default=1e-15, help="absolute series tail bound")
    p.add_argument("--max-terms", type=int, default=400)
    p.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER)
    p.add_argument("--no-strict-chamber", action="store_true",
                   help="accept angles outside the fundamental chamber")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dihedral-bessel",
        description="Generalized Bessel functions of dihedral groups: series and closed forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate D_k^W at one point pair")
    _add_group_flags(ev)
    ev.add_argument("--format", choices=("text", "json"), default="text")

    va = sub.add_parser("validate", help="run identity residuals and dual-path cross-checks")
    va.add_argument("--suite", choices=("all", "identities", "crosscheck"), default="all")
    va.add_argument("--tol", type=float, default=None,
                    help="override every per-case threshold with this value")
    va.add_argument("--report", choices=("text", "json"), default="text")
    va.add_argument("--threads", type=int, default=None)
    va.add_argument("--seed", type=int, default=DEFAULT_SEED)
    va.add_argument("--verbose", action="store_true", help="text report lists every case")

    ta = sub.add_parser("table", help="evaluate D_k^W over a grid and write CSV")
    _add_group_flags(ta)
    ta.add_argument("--grid", required=True,
                    help='e.g. "rho=0:2:5,theta=0:0.7:5" (start:stop:count, or a single value)')
    ta.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    ta.add_argument("--threads", type=int, default=None)
    ta.add_argument("--timing", action="store_true", help="fill the wall_micros column")

    be = sub.add_parser("bench", help="time series vs integral, shared fit vs per-node refit")
    _add_group_flags(be, points=False)
    be.set_defaults(method="auto")
    be.add_argument("--pairs", type=int, default=3)
    be.add_argument("--repeat", type=int, default=3, help="timing repetitions (minimum kept)")
    be.add_argument("--seed", type=int, default=DEFAULT_SEED)
    be.add_argument("--format", choices=("text", "json"), default="text")
    return parser


# ---------------------------------------------------------------- helpers

def params_from_args(args) -> DihedralParams:
    if args.group == "even":
        if args.p is None:
            raise UsageError("--group even needs --p")
        if args.n is not None:
            raise UsageError("--n applies to odd groups only")
        return DihedralParams.even(args.p, args.k0, 0.0 if args.k1 is None else args.k1)
    if args.n is None:
        raise UsageError("--group odd needs --n")
    if args.p is not None or args.k1 is not None:
        raise UsageError("odd groups take --n and --k0 only")
    return DihedralParams.odd(args.n, args.k0)


def control_from_args(args) -> EvalControl:
    return EvalControl(max_terms=args.max_terms, tail_tol=args.tol)


def _check_method(params: DihedralParams, method: str) -> None:
    if method == "integral" and not params.integer_nu:
        which = "k0 + k1" if params.parity == "even" else "k"
        raise UsageError(f"--method integral requires an integer nu = {which} >= 1 "
                         f"(got nu = {params.nu!r})")


def _threads(n):
    if n is None:
        return os.cpu_count() or 1
    if n < 1:
        raise UsageError("--threads must be >= 1")
    return n


def _pmap(fn, items, threads):
    if threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def fmt17(x: float) -> str:
    return f"{x:.16e}"


# -------------------------------------------------------------------- eval

def run_eval(args) -> int:
    params = params_from_args(args)
    _check_method(params, args.method)
    ctrl = control_from_args(args)
    missing = [name for name in GRID_AXES if getattr(args, name) is None]
    if missing:
        raise UsageError("eval needs " + ", ".join(f"--{m}" for m in missing))
    x = PolarPoint(args.rho, args.phi)
    y = PolarPoint(args.r, args.theta)
    strict = not args.no_strict_chamber
    if strict:
        check_chamber(params, x)
        check_chamber(params, y)
    rep = dkw(params, x, y, args.method, ctrl, args.quad_order, strict=strict)
    if args.format == "json":
        print(json.dumps(rep.to_dict()))
    else:
        print(f"value          {rep.value!r}")
        print(f"abs_error_est  {rep.abs_error_est!r}")
        print(f"method         {rep.method}")
        print(f"terms_used     {rep.terms_used}")
        print(f"quad_order     {rep.quad_order}")
    return EXIT_OK


# ---------------------------------------------------------------- validate

def _safe(fn, item):
    try:
        return fn(item), None
    except (DihedralBesselError, ArithmeticError, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_validate(args) -> int:
    threads = _threads(args.threads)
    records = []
    if args.suite in ("all", "identities"):
        cases = identity_cases()
        for case, (res, err) in zip(cases, _pmap(lambda c: _safe(evaluate_case, c), cases,
                                                  threads)):
            records.append(("identities", case.to_dict(), res, err))
    if args.suite in ("all", "crosscheck"):
        checker = CrossChecker()
        checks = crosscheck_cases(args.seed)
        for chk, (res, err) in zip(checks, _pmap(lambda c: _safe(checker.evaluate, c), checks,
                                                  threads)):
            records.append(("crosscheck", chk.to_dict(), res, err))

    rows = []
    for suite, desc, res, err in records:
        threshold = args.tol if args.tol is not None else desc["threshold"]
        residual = res.residual if res is not None else math.nan
        passed = err is None and residual <= threshold
        row = {"suite": suite, "kind": desc["kind"], "params": desc["params"],
               "residual": residual if err is None else None, "threshold": threshold,
               "passed": passed}
        if err is not None:
            row["error"] = err
        rows.append(row)
    failed = [r for r in rows if not r["passed"]]

    if args.report == "json":
        print(json.dumps({"cases": rows, "total": len(rows), "failed": len(failed)}))
    else:
        by_kind = {}
        for r in rows:
            k = by_kind.setdefault((r["suite"], r["kind"]), [0, 0, 0.0])
            k[0] += 1
            k[1] += not r["passed"]
            if r["residual"] is not None:
                k[2] = max(k[2], r["residual"])
        for r in (rows if args.verbose else failed):
            status = "PASS" if r["passed"] else "FAIL"
            detail = r.get("error") or f"residual={r['residual']:.3e}"
            print(f"{status} {r['suite']}/{r['kind']} {json.dumps(r['params'])} {detail} "
                  f"threshold={r['threshold']:.1e}")
        for (suite, kind), (n, nf, worst) in by_kind.items():
            print(f"{suite:<11} {kind:<26} cases={n:<4d} failed={nf:<3d} max_residual={worst:.3e}")
        print(f"total={len(rows)} failed={len(failed)}")
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------- table

def parse_grid(spec: str) -> dict[str, list[float]]:
    axes = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"grid entry {part!r} is not name=value")
        name, rng = (s.strip() for s in part.split("=", 1))
        if name not in GRID_AXES:
            raise UsageError(f"unknown grid axis {name!r}; use {', '.join(GRID_AXES)}")
        if name in axes:
            raise UsageError(f"grid axis {name!r} given twice")
        bits = rng.split(":")
        try:
            if len(bits) == 1:
                values = [float(bits[0])]
            elif len(bits) == 3:
                lo, hi, count = float(bits[0]), float(bits[1]), int(bits[2])
                if count < 1:
                    raise UsageError(f"grid axis {name!r} needs a positive count")
                values = [float(v) for v in np.linspace(lo, hi, count)]
            else:
                raise UsageError(f"grid axis {name!r}: use start:stop:count or a single value")
        except ValueError:
            raise UsageError(f"grid axis {name!r}: cannot parse {rng!r}") from None
        axes[name] = values
    if not axes:
        raise UsageError("empty --grid")
    return axes


def run_table(args) -> int:
    params = params_from_args(args)
    _check_method(params, args.method)
    ctrl = control_from_args(args)
    threads = _threads(args.threads)
    axes = parse_grid(args.grid)
    fixed = {}
    for name in GRID_AXES:
        if name in axes:
            continue
        val = getattr(args, name)
        if val is None:
            raise UsageError(f"--{name} is needed when it is not a grid axis")
        fixed[name] = val
    names = list(axes)
    points = []
    for combo in itertools.product(*(axes[n] for n in names)):
        row = dict(fixed)
        row.update(zip(names, combo))
        points.append(row)
    strict = not args.no_strict_chamber
    for row in points:
        x, y = PolarPoint(row["rho"], row["phi"]), PolarPoint(row["r"], row["theta"])
        if strict:
            check_chamber(params, x)
            check_chamber(params, y)

    if args.out != "-":
        try:
            handle = open(args.out, "a", encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out!r}: {exc.strerror}") from None
        handle.close()

    def work(row):
        x, y = PolarPoint(row["rho"], row["phi"]), PolarPoint(row["r"], row["theta"])
        t0 = time.perf_counter()
        rep = dkw(params, x, y, args.method, ctrl, args.quad_order, strict=strict)
        return rep, int(round((time.perf_counter() - t0) * 1e6))

    results = _pmap(work, points, threads)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(GRID_AXES) + ["value", "abs_error_est", "method", "wall_micros"])
    for row, (rep, micros) in zip(points, results):
        writer.writerow([fmt17(row[n]) for n in GRID_AXES]
                        + [fmt17(rep.value), fmt17(rep.abs_error_est), rep.method,
                           str(micros) if args.timing else ""])
    text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


# ------------------------------------------------------------------- bench

def _best_time(fn, repeat):
    best, value = math.inf, None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def run_bench(args) -> int:
    params = params_from_args(args)
    if not params.integer_nu:
        raise UsageError("bench compares the integral route, which needs an integer nu")
    ctrl = control_from_args(args)
    integral = dkw_even_integral if params.parity == "even" else dkw_odd_integral
    pairs = random_chamber_pairs(params, args.pairs, random.Random(args.seed))
    order = args.quad_order
    rows = []
    for x, y in pairs:
        entry = {"x": {"radius": x.radius, "angle": x.angle},
                 "y": {"radius": y.radius, "angle": y.angle}}
        variants = (
            ("series", lambda: dkw(params, x, y, "series", ctrl)),
            ("integral_shared_fit",
             lambda: integral(params, x, y, order, shared_fit=True, check_order=False)),
            ("integral_per_node_fit",
             lambda: integral(params, x, y, order, shared_fit=False, check_order=False)),
        )
        for name, fn in variants:
            try:
                seconds, rep = _best_time(fn, args.repeat if name != "integral_per_node_fit" else 1)
                entry[name] = {"value": rep.value, "abs_error_est": rep.abs_error_est,
                               "wall_micros": int(round(seconds * 1e6))}
            except (DihedralBesselError, ArithmeticError) as exc:
                entry[name] = {"error": f"{type(exc).__name__}: {exc}"}
        shared, refit = entry["integral_shared_fit"], entry["integral_per_node_fit"]
        if "wall_micros" in shared and "wall_micros" in refit:
            entry["speedup"] = refit["wall_micros"] / max(shared["wall_micros"], 1)
        rows.append(entry)
    speedups = [r["speedup"] for r in rows if "speedup" in r]
    summary = {"quad_order": order, "pairs": len(rows),
               "median_speedup": float(np.median(speedups)) if speedups else None}
    if args.format == "json":
        print(json.dumps({"rows": rows, "summary": summary}))
    else:
        for i, r in enumerate(rows):
            print(f"pair {i}: x=({r['x']['radius']:.4f}, {r['x']['angle']:.4f}) "
                  f"y=({r['y']['radius']:.4f}, {r['y']['angle']:.4f})")
            for name in ("series", "integral_shared_fit", "integral_per_node_fit"):
                e = r[name]
                if "error" in e:
                    print(f"  {name:<22} FAILED {e['error']}")
                else:
                    print(f"  {name:<22} value={e['value']!r:<24} err={e['abs_error_est']:.2e} "
                          f"time={e['wall_micros']} us")
            if "speedup" in r:
                print(f"  shared-fit speedup     {r['speedup']:.1f}x")
        if summary["median_speedup"] is not None:
            print(f"median shared-fit speedup at quad_order {order}: "
                  f"{summary['median_speedup']:.1f}x")
    return EXIT_OK


COMMANDS = {"eval": run_eval, "validate": run_validate, "table": run_table, "bench": run_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except DomainError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except (DihedralBesselError, ArithmeticError) as exc:
        _err(f"numerical failure: {type(exc).__name__}: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
