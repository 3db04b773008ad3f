"""Command line front end.

Subcommands: build, count, stats, bench, entropy, verify-bounds. Results go
to stdout as key=value lines (plus a small table for stats and a CSV row for
bench); diagnostics go to stderr. Exit codes: 0 success, 1 bad input or
usage, 2 a verification or internal invariant failure.
"""

import argparse
import random
import statistics
import sys
import time

from . import entropy as ent
from . import storage, textcore
from .fmindex import IndexVariant, build_index

VARIANT_BY_FLAG = {
    "ssa": IndexVariant.SSA,
    "ssa-rrr": IndexVariant.SSA_RRR,
    "fixed": IndexVariant.FIXED_BLOCK,
    "fixed-rrr": IndexVariant.FIXED_BLOCK_RRR,
}


class CliError(Exception):
    pass


def _read_file(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path!r}: {exc}") from exc


def _load_index(path):
    try:
        return storage.load_index(path)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from exc


def _build_text(path):
    raw = _read_file(path)
    if not raw:
        raise CliError(f"{path!r} is empty, nothing to index")
    return textcore.build_text(raw)


def cmd_build(args):
    t = _build_text(args.text)
    variant = VARIANT_BY_FLAG[args.variant]
    block_size = args.block_size if variant.fixed else None
    if args.block_size is not None and not variant.fixed:
        raise CliError("--block-size applies to the fixed variants only")
    started = time.perf_counter()
    index = build_index(t, variant, block_size, args.rrr_block_size)
    build_seconds = time.perf_counter() - started
    written = storage.save_index(index, args.output)
    report = index.size_report()
    print(f"n={index.n}")
    print(f"sigma={index.sigma}")
    print(f"variant={index.variant.value}")
    print(f"block_size={index.block_size if index.block_size is not None else 0}")
    print(f"build_seconds={build_seconds:.3f}")
    print(f"bits_per_symbol={report.bits_per_symbol:.4f}")
    print(f"index_bytes={written}")
    return 0


def _patterns_from_args(args):
    patterns = [p.encode("utf-8") for p in args.pattern or []]
    if args.patterns_file:
        patterns.extend(_read_file(args.patterns_file).splitlines())
    if not patterns:
        raise CliError("no patterns given; use --pattern or --patterns-file")
    return patterns


def cmd_count(args):
    index = _load_index(args.index)
    for pattern in _patterns_from_args(args):
        print(f"{pattern.decode('utf-8', 'replace')}\t{index.count(pattern)}")
    return 0


def cmd_stats(args):
    index = _load_index(args.index)
    report = index.size_report()
    rows = list(report.components().items()) + [("total", report.total)]
    width = max(len(name) for name, _ in rows)
    for name, bits in rows:
        print(f"{name:<{width}}  {bits:>14}  {bits / report.n:10.4f} bits/sym", file=sys.stderr)
    print(f"n={report.n}")
    print(f"variant={report.variant}")
    for name, bits in report.components().items():
        print(f"{name}_bits={bits}")
    print(f"total_bits={report.total}")
    print(f"bits_per_symbol={report.bits_per_symbol:.4f}")
    return 0


def cmd_bench(args):
    index = _load_index(args.index)
    raw = _read_file(args.text)
    if len(raw) < args.length:
        raise CliError("text shorter than the requested pattern length")
    rng = random.Random(args.seed)
    patterns = []
    for _ in range(args.patterns):
        at = rng.randrange(len(raw) - args.length + 1)
        patterns.append(raw[at : at + args.length])

    def run_once():
        times = []
        total = 0
        for pattern in patterns:
            t0 = time.perf_counter_ns()
            total += index.count(pattern)
            times.append(time.perf_counter_ns() - t0)
        return times, total

    runs = []
    counts_sum = None
    for _ in range(args.repeats):
        times, total = run_once()
        if counts_sum is None:
            counts_sum = total
        elif counts_sum != total:
            raise AssertionError("pattern counts changed between repeats")
        runs.append(times)
    best = min(runs, key=sum)
    mean_us = sum(best) / len(best) / 1000.0
    median_us = statistics.median(best) / 1000.0
    p99_us = sorted(best)[min(len(best) - 1, int(0.99 * len(best)))] / 1000.0
    report = index.size_report()
    print(f"patterns={args.patterns}")
    print(f"length={args.length}")
    print(f"seed={args.seed}")
    print(f"repeats={args.repeats}")
    print(f"counts_sum={counts_sum}")
    print(f"mean_us={mean_us:.3f}")
    print(f"median_us={median_us:.3f}")
    print(f"p99_us={p99_us:.3f}")
    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        t0 = time.perf_counter()
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            for _ in pool.map(index.count, patterns):
                pass
        wall = time.perf_counter() - t0
        print(f"threads={args.threads}")
        print(f"throughput_qps={len(patterns) / wall:.1f}")
    print("csv=variant,b,bits_per_symbol,mean_us")
    print(
        f"{index.variant.value},{index.block_size or 0},"
        f"{report.bits_per_symbol:.4f},{mean_us:.3f}"
    )
    return 0


def cmd_entropy(args):
    t = _build_text(args.text)
    print(f"n={t.n}")
    print(f"sigma={t.sigma}")
    print(f"H0={ent.h0(t.data):.6f}")
    for k in range(1, args.max_k + 1):
        print(f"H{k}={ent.hk(t, k):.6f}")
    return 0


def cmd_verify_bounds(args):
    t = _build_text(args.text)
    k = args.k
    if k < 0:
        raise CliError("context order must be non-negative")
    b = 1024 if args.block_size is None else args.block_size
    if b < 1:
        raise CliError("block size must be >= 1")
    bw = textcore.bwt(t)
    part = ent.context_partition(bw, t, k)
    lhs1 = ent.partition_entropy(bw.l, part)
    rhs1 = t.n * ent.hk(t, k)
    residual = abs(lhs1 - rhs1) / max(1.0, abs(rhs1))
    ok1 = residual <= ent.REL_TOL
    lhs3, rhs3 = ent.verify_lemma3(bw.l, part, b)
    slack = ent.REL_TOL * max(1.0, abs(rhs3))
    ok3 = lhs3 <= rhs3 + slack
    print(f"n={t.n}")
    print(f"sigma={t.sigma}")
    print(f"k={k}")
    print(f"block_size={b}")
    print(f"context_blocks={part.block_count}")
    print(f"context_bits={lhs1:.6f}")
    print(f"n_hk_bits={rhs1:.6f}")
    print(f"identity_residual={residual:.3e}")
    print(f"identity={'PASS' if ok1 else 'FAIL'}")
    print(f"fixed_bits={lhs3:.6f}")
    print(f"bound_bits={rhs3:.6f}")
    print(f"fixed_overhead_bits={lhs3 - (rhs3 - (part.block_count - 1) * b):.6f}")
    print(f"overhead_bound_bits={(part.block_count - 1) * b}")
    print(f"bound={'PASS' if ok3 else 'FAIL'}")
    if not (ok1 and ok3):
        print("bound verification failed", file=sys.stderr)
        return 2
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fmblock",
        description="Compressed full-text count index and entropy toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a file and save the result")
    p.add_argument("text", help="file to index")
    p.add_argument("-o", "--output", required=True, help="index file to write")
    p.add_argument("--variant", choices=sorted(VARIANT_BY_FLAG), default="fixed")
    p.add_argument("--block-size", type=int, default=None)
    p.add_argument("--rrr-block-size", type=int, default=15)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("count", help="count pattern occurrences with a saved index")
    p.add_argument("index")
    p.add_argument("-p", "--pattern", action="append", help="literal pattern, repeatable")
    p.add_argument("--patterns-file", help="file with one pattern per line")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", help="size breakdown of a saved index")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="time count queries over sampled patterns")
    p.add_argument("index")
    p.add_argument("text", help="file the index was built from, used to sample patterns")
    p.add_argument("--patterns", type=int, default=10000)
    p.add_argument("--length", type=int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("entropy", help="order-0..k entropy of a file")
    p.add_argument("text")
    p.add_argument("-k", "--max-k", type=int, default=0)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify-bounds", help="check the partition-entropy identities on a file")
    p.add_argument("text")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--block-size", type=int, default=None)
    p.set_defaults(func=cmd_verify_bounds)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant violations and bugs, not user input
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
