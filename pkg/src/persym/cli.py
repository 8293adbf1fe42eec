"""Command line entry point: ``persym {census,verify,rq,formulas}``.

Exit codes: 0 all checks pass, 1 a mathematical mismatch was found,
2 usage or capacity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from .census import DEFAULT_STATE_CAP, METHODS, rank_census
from .errors import CapacityError, FormulaError, ShapeError
from .formulas import (
    conjectured_distribution,
    gamma_conjectured_alt,
    gamma_k_minus_1,
    pow2_factor,
    rq_closed,
    special_case_density,
)
from .laurent import DEFAULT_COSET_CAP, coset_integral
from .model import Shape, parse_shape
from .parallel import resolve_threads
from .report import Caps, dumps, num, shape_json, verify
from .solutions import DEFAULT_TUPLE_CAP, SolutionSystem, count_solutions

log = logging.getLogger("persym")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def parse_count(text: str) -> int:
    """Accept ``1048576``, ``2^20`` or ``2**20``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\^|\*\*)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}")
    base = int(m.group(1))
    return base ** int(m.group(2)) if m.group(2) else base


def parse_q_list(text: str) -> list[int]:
    try:
        qs = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad q list {text!r}") from None
    if not qs or any(q < 1 for q in qs):
        raise argparse.ArgumentTypeError("q values must be >= 1")
    return qs


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def factored(value: int | Fraction) -> str | None:
    """``2^a * m`` for a positive integer, else None."""
    if isinstance(value, Fraction):
        if value.denominator != 1:
            return None
        value = value.numerator
    if value <= 0:
        return None
    a, m = pow2_factor(value)
    return f"2^{a} * {m}"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", required=True, help="block row counts, e.g. 2,2,2,2 or 4x4")
    p.add_argument("--k", required=True, type=int, help="column count")
    p.add_argument("--threads", type=positive_int, default=None, help="worker threads (default: PERSYM_THREADS or CPU count)")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output", type=Path, default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persym", description=__doc__.splitlines()[0])
    parser.add_argument("--quiet", action="store_true", help="suppress progress and cost messages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="count a family's members by rank")
    _common(p)
    p.add_argument("--cap", type=parse_count, default=DEFAULT_STATE_CAP, help="state cap, e.g. 2^28")
    p.add_argument("--method", choices=METHODS, default="exhaustive")

    p = sub.add_parser("verify", help="census plus every cross-check within reach")
    _common(p)
    p.add_argument("--q", type=parse_q_list, default=[1], help="comma-separated q values")
    p.add_argument("--cap", type=parse_count, default=DEFAULT_STATE_CAP, help="census state cap")
    p.add_argument("--integral-cap", type=parse_count, default=DEFAULT_COSET_CAP)
    p.add_argument("--brute-cap", type=parse_count, default=DEFAULT_TUPLE_CAP)
    p.add_argument("--augment", type=int, default=0, help="append this many free rows")
    p.add_argument("--method", choices=("exhaustive", "blockwise", "auto"), default="exhaustive")

    p = sub.add_parser("rq", help="one R_q value by a chosen route")
    _common(p)
    p.add_argument("--q", type=positive_int, required=True)
    p.add_argument("--mode", choices=("closed", "integral", "brute"), default="closed")
    p.add_argument(
        "--dist",
        choices=("conjectured", "census"),
        default=None,
        help="distribution for --mode closed (default: conjectured when the shape is eligible)",
    )
    p.add_argument("--cap", type=parse_count, default=None, help="state cap for the chosen route")

    p = sub.add_parser("formulas", help="closed-form table for a shape, no enumeration")
    _common(p)
    p.add_argument("--q", type=parse_q_list, default=[1])
    return parser


def _emit(args, text: str) -> None:
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_census(args, shape: Shape) -> int:
    threads = resolve_threads(args.threads)
    t0 = time.perf_counter()
    dist = rank_census(shape, threads, args.cap, method=args.method)
    elapsed = time.perf_counter() - t0
    total_ok = dist.total == 1 << shape.coeff_bits
    if args.out == "csv":
        _emit(args, _csv([["rank", "count"]] + [[i, c] for i, c in enumerate(dist.counts)]))
    else:
        _emit(
            args,
            dumps(
                {
                    "counts": [num(c) for c in dist.counts],
                    "meta": {"method": args.method, "seconds": round(elapsed, 6), "threads": threads},
                    "shape": shape_json(shape),
                    "total": num(dist.total),
                    "total_ok": total_ok,
                }
            ),
        )
    return EXIT_OK if total_ok else EXIT_MISMATCH


def cmd_verify(args, shape: Shape) -> int:
    threads = resolve_threads(args.threads)
    caps = Caps(census=args.cap, integral=args.integral_cap, brute=args.brute_cap)
    rep = verify(shape, args.q, threads, caps, augment=args.augment, census_method=args.method)
    _emit(args, rep.to_csv() if args.out == "csv" else dumps(rep.to_json()))
    for note in rep.notes:
        log.info("note: %s", note)
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def cmd_rq(args, shape: Shape) -> int:
    threads = resolve_threads(args.threads)
    source = None
    if args.mode == "closed":
        source = args.dist or ("conjectured" if shape.conjecture_eligible else "census")
        if source == "conjectured":
            dist = conjectured_distribution(shape)
        else:
            dist = rank_census(shape, threads, args.cap or DEFAULT_STATE_CAP)
        value = rq_closed(dist, args.q)
    elif args.mode == "integral":
        value = coset_integral(shape, args.q, args.cap or DEFAULT_COSET_CAP, threads)
    else:
        value = count_solutions(SolutionSystem(shape, args.q), args.cap or DEFAULT_TUPLE_CAP, threads)
    text = num(value)
    fac = factored(value)
    if args.out == "csv":
        _emit(args, _csv([["q", "mode", "value", "factored"], [args.q, args.mode, text, fac or ""]]))
    else:
        _emit(
            args,
            dumps({"factored": fac, "mode": args.mode, "q": args.q, "shape": shape_json(shape), "source": source, "value": text}),
        )
    return EXIT_OK


def cmd_formulas(args, shape: Shape) -> int:
    dist = conjectured_distribution(shape)
    rows = []
    for i, g in enumerate(dist.counts):
        alt = gamma_conjectured_alt(shape, i) if 1 <= i <= shape.k - 1 else None
        special = special_case_density(shape.n, i) if shape.n <= 3 and 1 <= i <= shape.k - 1 else None
        rows.append(
            {
                "factored": num(alt),
                "gamma": num(g),
                "n_special": num(special),
                "rank": i,
            }
        )
    eliminated = gamma_k_minus_1(shape)
    rqs = []
    for q in args.q:
        value = rq_closed(dist, q)
        rqs.append({"factored": factored(value), "q": q, "value": num(value)})
    consistent = all(
        r["factored"] in (None, r["gamma"]) and r["n_special"] in (None, r["gamma"]) for r in rows
    ) and eliminated == dist.counts[shape.k - 1]
    if args.out == "csv":
        table = [["rank", "gamma", "factored", "n_special"]]
        table += [[r["rank"], r["gamma"], r["factored"] or "", r["n_special"] or ""] for r in rows]
        table += [[], ["q", "rq", "factored"]] + [[r["q"], r["value"], r["factored"] or ""] for r in rqs]
        _emit(args, _csv(table))
    else:
        _emit(
            args,
            dumps(
                {
                    "consistent": consistent,
                    "eliminated_k_minus_1": num(eliminated),
                    "gamma": rows,
                    "rq": rqs,
                    "shape": shape_json(shape),
                    "total": num(dist.total),
                }
            ),
        )
    return EXIT_OK if consistent else EXIT_MISMATCH


COMMANDS = {"census": cmd_census, "verify": cmd_verify, "rq": cmd_rq, "formulas": cmd_formulas}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="persym: %(message)s",
        stream=sys.stderr,
    )
    try:
        shape = parse_shape(args.s, args.k)
        return COMMANDS[args.command](args, shape)
    except CapacityError as exc:
        print(f"persym: refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ShapeError, ValueError) as exc:
        print(f"persym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormulaError as exc:
        print(f"persym: formula error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
