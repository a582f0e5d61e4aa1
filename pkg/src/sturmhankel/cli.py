"""Command-line entry point: ``sturmhankel {eval,verify,render,dump,bench}``.

Exit codes: 0 ok, 2 closed/oracle mismatch, 3 coverage anomaly, 4 overflow
(including an oracle prefix too long to allocate),
5 bad arguments, 6 prime pool too small for the requested order.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .closed_form import evaluate
from .oracle import ConfigurationError, eval_oracle
from .partition import Kind, PartitionError, Window, classify, family_upto
from .render import PALETTE_VERSION, write_ppm
from .sequence import WidthOverflowError, encode, s_prefix
from .verify import bench, compare_window

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_COVERAGE = 3
EXIT_OVERFLOW = 4
EXIT_USAGE = 5
EXIT_CONFIG = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _region_fields(cell) -> dict:
    r = cell.region
    return {
        "region": cell.kind,
        "k": None if r is None else r.k,
        "i": None if r is None else r.i,
        "class": cell.flag_text or "Origin",
    }


def cmd_eval(args) -> int:
    cell = classify(args.m, args.n)
    rec = {"m": args.m, "n": args.n}
    code = EXIT_OK
    if args.method in ("closed", "both"):
        rec["closed"] = evaluate(cell)
    if args.method in ("oracle", "both"):
        rec["oracle"] = eval_oracle(args.m, args.n)
    if args.method == "both":
        rec["match"] = rec["closed"] == rec["oracle"]
        code = EXIT_OK if rec["match"] else EXIT_MISMATCH
    rec["value"] = rec.get("closed", rec.get("oracle"))
    rec.update(_region_fields(cell))
    print(json.dumps(rec, sort_keys=False))
    return code


def cmd_verify(args) -> int:
    report = compare_window(Window(args.mmax, args.nmax), jobs=args.jobs)
    print("\n".join(report.lines()))
    return report.exit_code


def cmd_render(args) -> int:
    data = write_ppm(args.out, Window(args.mmax, args.nmax), args.source, args.transpose)
    print(f"wrote {args.out} ({len(data)} bytes, palette {PALETTE_VERSION})")
    return EXIT_OK


def cmd_dump(args) -> int:
    what = args.what
    if what == "seq":
        print("".join(map(str, s_prefix(args.len))))
    elif what == "frep":
        rep = encode(args.n)
        print(json.dumps({"n": args.n, "indices": rep.indices, "digits": str(rep)}))
    elif what == "family":
        print(",".join(map(str, family_upto(Kind(args.kind), args.k, args.bound))))
    else:
        out = csv.writer(sys.stdout, lineterminator="\n")
        sys.stdout.write(f"# sturmhankel partition dump palette={PALETTE_VERSION} mmax={args.mmax} nmax={args.nmax}\n")
        out.writerow(["m", "n", "value", "region", "k", "i", "class"])
        for m, n in Window(args.mmax, args.nmax).cells():
            cell = classify(m, n)
            row = _region_fields(cell)
            k = "" if row["k"] is None else row["k"]
            i = "" if row["i"] is None else row["i"]
            out.writerow([m, n, evaluate(cell), row["region"], k, i, row["class"]])
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench(args.n, m=args.m, repeats=args.repeats, method=args.method)
    print(f"{'n':>5} {'m':>5} {'value':>8} {'closed_us':>11} {'oracle_us':>11} {'speedup':>9}")
    code = EXIT_OK
    for r in rows:
        print(f"{r.n:>5} {r.m:>5} {r.closed_value:>8} {r.closed_s * 1e6:>11.2f} {r.oracle_s * 1e6:>11.2f} {r.ratio:>9.1f}")
        if not r.agree:
            print(f"  value mismatch at ({r.m},{r.n}): closed={r.closed_value} oracle={r.oracle_value}")
            code = EXIT_MISMATCH
    return code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sturmhankel", description="Hankel determinants of the 1->101, 0->1 fixed point.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="one cell, closed form and/or oracle")
    e.add_argument("--m", type=_nonneg, required=True)
    e.add_argument("--n", type=_pos, required=True)
    e.add_argument("--method", choices=("closed", "oracle", "both"), default="closed")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="partition and closed-vs-oracle check over a window")
    v.add_argument("--mmax", type=_nonneg, required=True)
    v.add_argument("--nmax", type=_pos, required=True)
    v.add_argument("--jobs", type=_pos, default=1)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="write a PPM image of a window")
    r.add_argument("--mmax", type=_nonneg, required=True)
    r.add_argument("--nmax", type=_pos, required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--source", choices=("closed", "oracle"), default="closed")
    r.add_argument("--transpose", action="store_true", help="n to the right, m upward")
    r.set_defaults(func=cmd_render)

    d = sub.add_parser("dump", help="sequence, representation, family or partition listings")
    dsub = d.add_subparsers(dest="what", required=True, parser_class=_Parser)
    ds = dsub.add_parser("seq")
    ds.add_argument("--len", type=_nonneg, required=True)
    df = dsub.add_parser("frep")
    df.add_argument("--n", type=_nonneg, required=True)
    dfa = dsub.add_parser("family")
    dfa.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    dfa.add_argument("--k", type=_nonneg, required=True)
    dfa.add_argument("--bound", type=int, required=True)
    dp = dsub.add_parser("partition")
    dp.add_argument("--mmax", type=_nonneg, required=True)
    dp.add_argument("--nmax", type=_pos, required=True)
    d.set_defaults(func=cmd_dump)

    b = sub.add_parser("bench", help="closed form versus oracle latency")
    b.add_argument("--n", type=_pos, nargs="+", default=[1, 50, 100])
    b.add_argument("--m", type=_nonneg, default=0)
    b.add_argument("--repeats", type=_pos, default=7)
    b.add_argument("--method", choices=("crt", "bareiss"), default="crt")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WidthOverflowError, MemoryError) as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except ConfigurationError as exc:
        print(f"configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PartitionError as exc:
        print(f"partition: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
