"""Command-line front end.

    sawtm census --mode sap --n 16 --method skip --k 3
    sawtm rect --mode saw --w 3 --h 2 --n 9
    sawtm verify --mode sap --n 12 --k 3
    sawtm bench --mode sap --n 18

Exit codes: 0 success/PASS, 1 FAIL, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from typing import Sequence

from .census import CensusConfig, CensusResult, Method, census, inscribed
from .core import CountSeries, LatticeMode, Rect
from .oracle import SAP_GUARD, SAW_GUARD, FeasibilityError
from .sweep import StateBudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

# rough live-state footprint: dict slot + bytes key + list of small ints
_STATE_BASE_BYTES = 250
_STATE_COEF_BYTES = 36


class UsageError(Exception):
    pass


def state_budget(memory_limit: int | None, nmax: int) -> int | None:
    if memory_limit is None:
        return None
    return max(1, memory_limit // (_STATE_BASE_BYTES + _STATE_COEF_BYTES * (nmax + 1)))


def output_record(mode: LatticeMode, method: Method, nmax: int, k: int | None, q: int | None,
                  series: CountSeries, seconds: float, peak_states: int) -> dict:
    return {
        "mode": mode.value,
        "method": method.value,
        "nmax": nmax,
        "k": k,
        "q": q,
        "counts": {str(n): str(c) for n, c in series.nonzero().items()},
        "timing": round(seconds, 6),
        "peak_states": peak_states,
    }


def series_from_record(record: dict) -> CountSeries:
    return CountSeries(record["nmax"], {int(n): int(c) for n, c in record["counts"].items()})


def _series_csv(series: CountSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["length", "count"])
    for n, c in series.nonzero().items():
        writer.writerow([n, c])
    return buf.getvalue()


def _emit(record: dict, series: CountSeries, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(record, indent=2) + "\n")
    else:
        out.write(_series_csv(series))


def _parse_auto(value: str) -> int | None:
    if value == "auto":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["sap", "saw"], default="sap")
    common.add_argument("--n", type=int, required=True, help="maximum length")
    common.add_argument("--k", type=_parse_auto, default=None, metavar="INT|auto")
    common.add_argument("--q", type=_parse_auto, default=None, metavar="INT|auto")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--memory-limit", type=int, default=None, metavar="BYTES",
                        help="cap on estimated live-state memory")
    common.add_argument("--allow-large", action="store_true",
                        help="let the brute-force oracle exceed its size guard")
    common.add_argument("--tightened-q", action="store_true")
    common.add_argument("--no-transpose-opt", action="store_true")
    common.add_argument("--no-prune", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="sawtm", description="Exact self-avoiding polygon and walk counts on the square lattice.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("census", parents=[common], help="count all lengths up to n")
    p.add_argument("--method", choices=["oracle", "tm", "skip"], default="tm")
    p = sub.add_parser("rect", parents=[common], help="inscribed counts for one box")
    p.add_argument("--method", choices=["oracle", "tm", "skip"], default="tm")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    sub.add_parser("verify", parents=[common], help="cross-check every feasible method")
    p = sub.add_parser("bench", parents=[common], help="time each method, CSV out")
    p.add_argument("--method", choices=["oracle", "tm", "skip"], default=None)
    return parser


def _config(args, method: Method) -> CensusConfig:
    mode = LatticeMode(args.mode)
    try:
        return CensusConfig(
            nmax=args.n, mode=mode, method=method, k=args.k, q=args.q, jobs=args.jobs,
            transpose_opt=not args.no_transpose_opt, tightened_q=args.tightened_q,
            prune=not args.no_prune, state_budget=state_budget(args.memory_limit, args.n),
            allow_large=args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _oracle_feasible(args) -> bool:
    guard = SAP_GUARD if args.mode == "sap" else SAW_GUARD
    return args.allow_large or args.n <= guard


def _cmd_census(args, out) -> int:
    config = _config(args, Method(args.method))
    res = census(config)
    rec = output_record(res.mode, res.method, res.nmax, res.k, res.q, res.series,
                        res.seconds, res.peak_states)
    _emit(rec, res.series, args.format, out)
    return EXIT_OK


def _cmd_rect(args, out) -> int:
    config = _config(args, Method(args.method))
    if args.w < 0 or args.h < 0:
        raise UsageError("--w and --h must be >= 0")
    rect = Rect(args.w, args.h)
    if config.mode is LatticeMode.SAP and (rect.w < 1 or rect.h < 1):
        raise UsageError("SAP boxes need --w and --h >= 1")
    start = time.perf_counter()
    series = inscribed(rect, config.mode, config.nmax, config.method, config.resolved_k,
                       config.q, prune=config.prune, allow_large=config.allow_large)
    rec = output_record(config.mode, config.method, config.nmax, config.resolved_k,
                        config.q, series, time.perf_counter() - start, 0)
    rec["rect"] = {"w": rect.w, "h": rect.h}
    _emit(rec, series, args.format, out)
    return EXIT_OK


def _first_divergence(a: CountSeries, b: CountSeries) -> int | None:
    for n in range(max(a.nmax, b.nmax) + 1):
        if a[n] != b[n]:
            return n
    return None


def _cmd_verify(args, out) -> int:
    methods = [Method.FULL_TM]
    if args.k is not None or args.n >= 4:
        methods.append(Method.SKIP)
    if _oracle_feasible(args):
        methods.insert(0, Method.ORACLE)
    results: list[CensusResult] = [census(_config(args, m)) for m in methods]
    ref = results[0]
    ok = True
    for res in results:
        line = f"{res.method.value:6s} k={res.k} q={res.q} {res.seconds:.3f}s"
        if res is ref:
            out.write(f"REF  {line}\n")
            continue
        n = _first_divergence(ref.series, res.series)
        if n is None:
            out.write(f"PASS {line}\n")
        else:
            ok = False
            out.write(f"FAIL {line}: first divergence at n={n}: "
                      f"{ref.method.value}={ref.series[n]} {res.method.value}={res.series[n]}\n")
    out.write("PASS\n" if ok else "FAIL\n")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_bench(args, out) -> int:
    if args.method is not None:
        methods = [Method(args.method)]
    else:
        methods = [Method.FULL_TM]
        if _oracle_feasible(args):
            methods.insert(0, Method.ORACLE)
        if args.k is not None or args.n >= 4:
            methods.append(Method.SKIP)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["method", "mode", "n", "k", "seconds", "peak_states"])
    for m in methods:
        res = census(_config(args, m))
        writer.writerow([m.value, args.mode, args.n, "" if res.k is None else res.k,
                         f"{res.seconds:.6f}", res.peak_states])
    return EXIT_OK


_COMMANDS = {"census": _cmd_census, "rect": _cmd_rect, "verify": _cmd_verify, "bench": _cmd_bench}


def run_cli(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.n < 1:
        print("sawtm: error: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sawtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StateBudgetExceeded, FeasibilityError) as exc:
        print(f"sawtm: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
