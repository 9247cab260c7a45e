"""Command-line front end.

    cotsum coeff    --p 3 --k 0..5
    cotsum c0       --q 1 --p 3 --method series --tol 1e-6
    cotsum vasyunin --q 2 --p 5
    cotsum audit    --p-max 20 --k-max 2000 --format json
    cotsum scan     --p 3,4,5,6

Output is line-delimited JSON (default) or CSV. Floats are written with 17
significant digits. Exit codes: 0 success, 1 audit hard failure (or an
unreachable series tolerance), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from datetime import datetime, timezone
from typing import Any, Iterable, Sequence

from . import __version__, audit, bounds, coeffs, series, trigsums
from .cache import SeriesCache
from .report import FAIL

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CSV_HEADERS = {
    "coeff": ["p", "k", "b_closed", "b_recursive", "b_convolution", "b_block", "agree"],
    "c0": ["command", "q", "p", "method", "value", "lo", "hi", "status", "notes"],
    "vasyunin": ["command", "q", "p", "value", "status", "notes"],
    "audit": ["check", "p", "k", "status", "detail"],
    "scan": ["p", "lower", "upper", "c0", "contained", "scaled_ratio"],
}


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return format(x, ".16e")


def to_json(obj: Any) -> str:
    """JSON text with every float at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


class Emitter:
    def __init__(self, command: str, fmt: str, timestamp: bool, out=None) -> None:
        self.command = command
        self.fmt = fmt
        self.timestamp = timestamp
        self.out = out or sys.stdout
        self._writer = None

    def emit(self, record: dict[str, Any], csv_row: Sequence[Any]) -> None:
        if self.fmt == "csv":
            if self._writer is None:
                self._writer = csv.writer(self.out, lineterminator="\n")
                self._writer.writerow(CSV_HEADERS[self.command])
            self._writer.writerow([_csv_cell(v) for v in csv_row])
        else:
            if self.timestamp:
                record = {**record, "timestamp": datetime.now(timezone.utc).isoformat()}
            self.out.write(to_json(record) + "\n")
        self.out.flush()


# -- argument parsing ----------------------------------------------------------


def parse_k_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}; use K or A..B") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}")
    return range(lo, hi + 1)


def parse_p_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}") from None


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field from JSON records")

    parser = argparse.ArgumentParser(prog="cotsum", description="Cotangent sums c0(q/p) and their series.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeff", parents=[common], help="coefficients b_k by all four methods")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=parse_k_range, required=True, help="K or A..B")

    p = sub.add_parser("c0", parents=[common], help="the cotangent sum c0(q/p)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--method", choices=("direct", "series", "phi", "double"), default="direct")
    p.add_argument("--tol", type=positive_float, default=1e-8)
    p.add_argument("--n", type=int, default=None, help="explicit count: series terms, double-series i_max, or phi terms")
    p.add_argument("--cache", metavar="DIR", default=None)

    p = sub.add_parser("vasyunin", parents=[common], help="the Vasyunin sum V(q/p)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("audit", parents=[common], help="run every identity and bound check")
    p.add_argument("--p-max", type=int, default=20)
    p.add_argument("--k-max", type=int, default=2000)

    p = sub.add_parser("scan", parents=[common], help="envelopes and c0(1/p)/p^3 for a list of p")
    p.add_argument("--p", type=parse_p_list, required=True, help="comma-separated list")
    return parser


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COTSUM_THREADS", "1")))
    except ValueError:
        return 1


# -- commands ------------------------------------------------------------------


def cmd_coeff(args, em: Emitter) -> int:
    if args.p < 2:
        raise UsageError(f"p must be >= 2, got {args.p}")
    stream = coeffs.b_recursive(args.p, args.k.stop - 1)
    for k in args.k:
        row = {
            "p": args.p,
            "k": k,
            "b_closed": coeffs.b_closed(k, args.p),
            "b_recursive": stream[k],
            "b_convolution": coeffs.b_convolution(k, args.p),
            "b_block": coeffs.b_block(k // args.p, k % args.p, args.p),
        }
        row["agree"] = len({row["b_closed"], row["b_recursive"], row["b_convolution"], row["b_block"]}) == 1
        em.emit({"command": "coeff", **row}, [row[h] for h in CSV_HEADERS["coeff"]])
    return EXIT_OK


def _validate_fraction(q: int, p: int) -> None:
    try:
        trigsums.RationalFraction(q, p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _series_with_cache(args, cache: SeriesCache | None) -> series.SeriesEvaluation:
    p, method = args.p, args.method
    if method == "double":
        if args.n is not None:
            i_max = args.n
        else:
            n = (cache.n_for_tol(p, "series", args.tol) if cache else None) or series.c0_series(p, tol=args.tol).n_terms
            i_max = -(-(n + 1) // p) - 1
        n_terms = (i_max + 1) * p - 1
        hit = cache.get(p, method, n_terms) if cache else None
        ev = hit or series.c0_double_series(p, i_max)
    else:
        n_terms = args.n if args.n is not None else (cache.n_for_tol(p, method, args.tol) if cache else None)
        hit = cache.get(p, method, n_terms) if cache and n_terms is not None else None
        if hit is not None:
            ev = hit
        elif args.n is not None:
            ev = series.c0_series(p, n=args.n)
        else:
            ev = series.c0_series(p, tol=args.tol)
            if cache:
                cache.remember_tol(p, method, args.tol, ev.n_terms)
    if cache and hit is None:
        cache.put(ev)
    return ev


def cmd_c0(args, em: Emitter) -> int:
    _validate_fraction(args.q, args.p)
    if args.method != "direct" and args.q != 1:
        raise UsageError(f"method {args.method!r} requires q = 1")
    inputs = {"q": args.q, "p": args.p, "method": args.method}
    value = lo = hi = None
    status, notes, code = "ok", "", EXIT_OK
    if args.method == "direct":
        value = trigsums.c0_direct(args.q, args.p)
    elif args.method == "phi":
        n = args.n if args.n is not None else 10_000
        if n < 1:
            raise UsageError("--n must be >= 1")
        inputs["n"] = n
        enc = bounds.c0_phi_decomposition(args.p, n)
        lo, hi = enc.lo, enc.hi
    else:
        inputs["tol" if args.n is None else "n"] = args.tol if args.n is None else args.n
        cache = SeriesCache(args.cache) if args.cache else None
        try:
            ev = _series_with_cache(args, cache)
        except series.ToleranceUnreachable as exc:
            ev = exc.best
            status, notes, code = "error", str(exc), EXIT_FAILURE
        lo, hi = ev.value.lo, ev.value.hi
        inputs["n_terms"] = ev.n_terms
    record = {
        "command": "c0",
        "inputs": inputs,
        "value": value,
        "enclosure": None if lo is None else {"lo": lo, "hi": hi},
        "status": status,
        "notes": notes,
    }
    em.emit(record, ["c0", args.q, args.p, args.method, value, lo, hi, status, notes])
    return code


def cmd_vasyunin(args, em: Emitter) -> int:
    _validate_fraction(args.q, args.p)
    value = trigsums.vasyunin_direct(args.q, args.p)
    record = {"command": "vasyunin", "inputs": {"q": args.q, "p": args.p}, "value": value, "status": "ok", "notes": ""}
    em.emit(record, ["vasyunin", args.q, args.p, value, "ok", ""])
    return EXIT_OK


def cmd_audit(args, em: Emitter) -> int:
    if args.p_max < 2:
        raise UsageError(f"--p-max must be >= 2, got {args.p_max}")
    if args.k_max < 0:
        raise UsageError(f"--k-max must be >= 0, got {args.k_max}")
    failed = False
    for check in audit.run_audit(args.p_max, args.k_max, threads=_threads()):
        failed |= check.status == FAIL
        em.emit({"command": "audit", **check.as_dict()}, [check.check, check.p, check.k, check.status, check.detail])
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_scan(args, em: Emitter) -> int:
    if not args.p:
        raise UsageError("empty p list")
    bad = [p for p in args.p if p < 3]
    if bad:
        raise UsageError(f"scan requires p >= 3, got {bad}")
    for rep in bounds.limit_scan(args.p, threads=_threads()):
        row = rep.as_dict()
        em.emit({"command": "scan", **row}, [row[h] for h in CSV_HEADERS["scan"]])
    return EXIT_OK


COMMANDS = {
    "coeff": cmd_coeff,
    "c0": cmd_c0,
    "vasyunin": cmd_vasyunin,
    "audit": cmd_audit,
    "scan": cmd_scan,
}


def main(argv: Iterable[str] | None = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    em = Emitter(args.command, args.format, not args.no_timestamp, out)
    try:
        return COMMANDS[args.command](args, em)
    except UsageError as exc:
        print(f"cotsum {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
