"""Command-line entry point: ``pastree {build,search,repeats,bench}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .baseline import build_ukkonen
from .bench import random_sequence, run_suite
from .builder import SCAN_MODES, BuildConfig, build_past, default_workers
from .core import Sequence
from .errors import ConfigError, PastError
from .ingest import (MB, bench_csv_text, read_sequence, render_table, to_canonical, to_dot,
                     to_record_coords)
from .query import enumerate_repeats, occurrences

MICROSATELLITE_K = (2, 6)


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    input: str | None
    format: str
    k: int | None
    workers: int
    normalize_case: bool
    output: str | None
    emit: str


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    return [_positive(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    values = [float(t) for t in text.split(",") if t.strip()]
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("sizes must be positive numbers")
    return values


def _workers_default() -> int:
    try:
        return default_workers()
    except ConfigError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pastree", description="k-mer suffix tree indexing")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, input_required=True):
        p.add_argument("--input", required=input_required, help="FASTA or plain-text sequence file")
        p.add_argument("--format", choices=("fasta", "text", "auto"), default="auto")
        p.add_argument("--normalize-case", action="store_true", help="uppercase ASCII before indexing")
        p.add_argument("--output", help="write here instead of stdout")

    def indexing(p, k_required=True):
        p.add_argument("--k", type=_positive, required=k_required, help="window (repeat) size")
        p.add_argument("--workers", type=_positive, default=_workers_default(),
                       help="parallel branch builders (default: $PAST_WORKERS or 1)")
        p.add_argument("--scan-mode", choices=SCAN_MODES, default="single")

    p = sub.add_parser("build", help="construct a tree and dump it")
    common(p)
    indexing(p, k_required=False)
    p.add_argument("--baseline", action="store_true", help="full Ukkonen tree instead of PaST")
    p.add_argument("--emit", choices=("canonical", "dot"), default="canonical")

    p = sub.add_parser("search", help="report occurrences of a pattern")
    common(p)
    indexing(p, k_required=False)
    p.add_argument("--pattern", required=True)
    p.add_argument("--baseline", action="store_true", help="search the full Ukkonen tree")
    p.add_argument("--record-coords", action="store_true", help="report record:offset positions")

    p = sub.add_parser("repeats", help="enumerate repeated k-mers")
    common(p)
    indexing(p)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--microsatellite", action="store_true", help="restrict --k to 2..6")
    p.add_argument("--record-coords", action="store_true", help="report record:offset positions")

    p = sub.add_parser("bench", help="time constructions and report speedups")
    common(p, input_required=False)
    p.add_argument("--sizes", type=_float_list, default=[1.0], help="text sizes in MB, comma separated")
    p.add_argument("--ks", type=_int_list, default=[5])
    p.add_argument("--workers", type=_int_list, default=[_workers_default()])
    p.add_argument("--timeout", type=float, help="seconds before a build counts as n/a")
    p.add_argument("--repetitions", type=_positive, default=1)
    p.add_argument("--baseline", action="store_true", help="also time the Ukkonen baseline")
    p.add_argument("--scan-mode", choices=SCAN_MODES, default="single")
    p.add_argument("--sigma", type=_positive, default=4, help="alphabet size of synthetic input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", choices=("csv", "table"), default="csv")
    return parser


def _config(args) -> CliConfig:
    workers = args.workers if isinstance(args.workers, int) else max(args.workers)
    return CliConfig(args.subcommand, args.input, args.format, getattr(args, "k", None), workers,
                     args.normalize_case, args.output, getattr(args, "emit", "text"))


def _tree(args, seq: Sequence):
    if getattr(args, "baseline", False):
        return build_ukkonen(seq)
    cfg = BuildConfig(args.k, workers=args.workers, scan_mode=args.scan_mode)
    return build_past(seq, cfg)


def _positions(positions, meta, record_coords: bool) -> list[str]:
    if not record_coords:
        return [str(p) for p in positions]
    out = []
    for p in positions:
        rid, off = to_record_coords(p, meta)
        out.append(f"{rid}:{off}")
    return out


def _cmd_build(args, parser) -> str:
    if not args.baseline and args.k is None:
        parser.error("build needs --k unless --baseline is given")
    seq, _ = read_sequence(args.input, args.format, args.normalize_case)
    tree = _tree(args, seq)
    return to_dot(tree, seq) if args.emit == "dot" else to_canonical(tree, seq)


def _cmd_search(args, parser) -> str:
    if not args.baseline and args.k is None:
        parser.error("search needs --k unless --baseline is given")
    seq, meta = read_sequence(args.input, args.format, args.normalize_case)
    pattern = args.pattern.upper() if args.normalize_case else args.pattern
    pos = occurrences(_tree(args, seq), seq, pattern).tolist()
    line = f"{pattern}: {len(pos)} occurrences"
    if pos:
        line += " at " + ", ".join(_positions(pos, meta, args.record_coords))
    return line + "\n"


def _cmd_repeats(args, parser) -> str:
    lo, hi = MICROSATELLITE_K
    if args.microsatellite and not lo <= args.k <= hi:
        parser.error(f"--microsatellite needs {lo} <= --k <= {hi}, got {args.k}")
    seq, meta = read_sequence(args.input, args.format, args.normalize_case)
    hits = enumerate_repeats(_tree(args, seq), seq, args.min_count)
    return "".join(f"{h.kmer}\t{h.count}\t{','.join(_positions(h.positions, meta, args.record_coords))}\n"
                   for h in hits)


def _cmd_bench(args, parser) -> str:
    sizes = [int(mb * MB) for mb in args.sizes]
    if args.input:
        full, _ = read_sequence(args.input, args.format, args.normalize_case)
        if max(sizes) > full.n:
            parser.error(f"input has {full.n} symbols, fewer than the largest size {max(sizes)}")
        inputs = [(Sequence.from_text(full.data[:s]), s) for s in sizes]
    else:
        inputs = [(random_sequence(s, args.sigma, seed=args.seed + i), s) for i, s in enumerate(sizes)]
    result = run_suite(inputs, args.ks, args.workers, baseline=args.baseline,
                       repetitions=args.repetitions, timeout=args.timeout, scan_mode=args.scan_mode)
    if args.emit == "table":
        text = render_table(result.rows)
        for sp in result.speedups:
            text += f"speedup {sp.kind} size={sp.text_size / MB:g}MB k={sp.k} P={sp.workers}: {sp.ratio:.3f}\n"
        return text
    return bench_csv_text(result.rows)


COMMANDS = {"build": _cmd_build, "search": _cmd_search, "repeats": _cmd_repeats, "bench": _cmd_bench}


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        text = COMMANDS[cfg.subcommand](args, parser)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except PastError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())
