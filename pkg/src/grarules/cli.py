"""Command-line front end: ``grarules {mine,sweep,granules}``.

Exit status is 0 on success (zero rules included), 1 on a usage error and
2 when the corpus cannot be read.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from .core import GranularError, Mmer, Thresholds, as_fraction
from .granules import MiningMode, enumerate_granules
from .ingest import (
    DEFAULT_AGE_BINS,
    CorpusError,
    DiscretizationSpec,
    PrioritySpec,
    load_generic,
    load_ml100k,
)
from .miner import Rule, mine

EXIT_OK, EXIT_USAGE, EXIT_CORPUS = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _values(text: str) -> list[Fraction]:
    """``0.05,0.1`` or an inclusive range ``start:stop:step``."""
    if ":" in text:
        start, stop, step = (_fraction(p) for p in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        out, v = [], start
        while v <= stop:
            out.append(v)
            v += step
        return out
    return [_fraction(p) for p in text.split(",") if p]


def _fmt(q: Fraction) -> str:
    """Shortest decimal for thresholds typed as decimals, else ``a/b``."""
    f = float(q)
    return repr(f) if Fraction(repr(f)) == q else f"{q.numerator}/{q.denominator}"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("corpus", help="ml-100k directory or generic corpus directory")
    common.add_argument("--corpus-kind", choices=("ml-100k", "generic"), default="ml-100k")
    common.add_argument("--mode", choices=("positive", "all"), default="positive",
                        help="positive-only granules or all granules")
    common.add_argument("--ms", type=_fraction, default=Fraction(1, 10))
    common.add_argument("--mt", type=_fraction, default=Fraction(1, 10))
    common.add_argument("--sc", type=_fraction, default=Fraction(12, 100))
    common.add_argument("--tc", type=_fraction, default=Fraction(15, 100))
    common.add_argument("--max-len", type=int, default=None, help="cap on descriptor length")
    common.add_argument("--min-rating", type=int, default=1, choices=range(1, 6))
    common.add_argument("--age-bins", default=",".join(map(str, DEFAULT_AGE_BINS.bounds)),
                        help="inclusive upper bounds of the age bins, comma separated")
    common.add_argument("--priority", default=None, help="genre priority order, comma separated")
    common.add_argument("--keep-unknown", action="store_true",
                        help="keep ml-100k's unknown genre flag as a scaled attribute")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default="-", help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="grarules", description="Mine granular association rules from an MMER.")
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("mine", parents=[common], help="mine rules once")
    m.add_argument("--preprocess", choices=("scaling", "priority"), default="scaling")
    s = sub.add_parser("sweep", parents=[common], help="rule counts over a threshold range")
    s.add_argument("--preprocess", choices=("scaling", "priority"), nargs="+", default=["scaling"],
                   help="one count column per preprocessing")
    s.add_argument("--vary", choices=("ms", "mt", "sc", "tc", "ms=mt"), required=True)
    s.add_argument("--values", type=_values, required=True, help="list a,b,c or range start:stop:step")
    g = sub.add_parser("granules", parents=[common], help="dump SG(ms) or TG(mt)")
    g.add_argument("--preprocess", choices=("scaling", "priority"), default="scaling")
    g.add_argument("--side", choices=("source", "target"), default="source")
    return p


def load_corpus(args, preprocess: str) -> Mmer:
    if args.corpus_kind == "generic":
        return load_generic(args.corpus)
    try:
        bins = DiscretizationSpec(DEFAULT_AGE_BINS.attribute, tuple(int(b) for b in args.age_bins.split(",")))
        priority = PrioritySpec(tuple(args.priority.split(","))) if args.priority else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return load_ml100k(args.corpus, preprocess, bins, priority, args.min_rating, args.keep_unknown)


def thresholds(args) -> Thresholds:
    try:
        return Thresholds(args.ms, args.mt, args.sc, args.tc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def config_record(args, **extra) -> dict:
    cfg = {
        "corpus": str(args.corpus),
        "corpus_kind": args.corpus_kind,
        "mode": MiningMode.parse(args.mode).value,
        "ms": _fmt(args.ms), "mt": _fmt(args.mt), "sc": _fmt(args.sc), "tc": _fmt(args.tc),
        "max_len": args.max_len,
    }
    if args.corpus_kind == "ml-100k":
        cfg.update(min_rating=args.min_rating, age_bins=args.age_bins,
                   priority=args.priority, keep_unknown=args.keep_unknown)
    cfg.update(extra)
    return cfg


def _terms(system, descriptor):
    return [[name, value] for name, value in system.names(descriptor)]


def rule_record(es: Mmer, r: Rule) -> dict:
    m = r.measures
    return {
        "type": "rule",
        "source": _terms(es.source, r.source),
        "target": _terms(es.target, r.target),
        "lh_size": r.lh_size,
        "rh_size": r.rh_size,
        **{k: f"{q.numerator}/{q.denominator}" for k, q in
           (("scov", m.scov), ("tcov", m.tcov), ("sconf", m.sconf), ("tconf", m.tconf))},
    }


def _dump(out, record):
    out.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def cmd_mine(args, out) -> int:
    es = load_corpus(args, args.preprocess)
    rules = mine(es, thresholds(args), args.mode, max_len=args.max_len)
    if args.format == "json":
        _dump(out, {"type": "header", "command": "mine",
                    "config": config_record(args, preprocess=args.preprocess), "total": len(rules)})
        for r in rules:
            _dump(out, rule_record(es, r))
    else:
        for r in rules:
            out.write(r.render(es) + "\n")
        out.write(f"total: {len(rules)} rules\n")
    return EXIT_OK


def sweep_counts(args) -> list[tuple[Fraction, list[int]]]:
    base = thresholds(args)
    corpora = [load_corpus(args, p) for p in args.preprocess]
    rows = []
    for v in args.values:
        keys = ("ms", "mt") if args.vary == "ms=mt" else (args.vary,)
        try:
            t = base.replace(**{k: v for k in keys})
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows.append((v, [len(mine(es, t, args.mode, max_len=args.max_len)) for es in corpora]))
    return rows


def cmd_sweep(args, out) -> int:
    rows = sweep_counts(args)
    if args.format == "json":
        cfg = config_record(args, preprocess=args.preprocess, vary=args.vary)
        _dump(out, {"type": "header", "command": "sweep", "config": cfg, "rows": len(rows)})
        for v, counts in rows:
            _dump(out, {"type": "row", "value": _fmt(v), "counts": dict(zip(args.preprocess, counts))})
    else:
        out.write("\t".join([args.vary] + list(args.preprocess)) + "\n")
        for v, counts in rows:
            out.write("\t".join([_fmt(v)] + [str(c) for c in counts]) + "\n")
    return EXIT_OK


def cmd_granules(args, out) -> int:
    es = load_corpus(args, args.preprocess)
    t = thresholds(args)
    system, mincov = (es.source, t.ms) if args.side == "source" else (es.target, t.mt)
    granules = enumerate_granules(system, mincov, args.mode, args.max_len)
    if args.format == "json":
        cfg = config_record(args, preprocess=args.preprocess, side=args.side)
        _dump(out, {"type": "header", "command": "granules", "config": cfg, "total": len(granules)})
        for g in granules:
            s = g.support
            _dump(out, {"type": "granule", "terms": _terms(system, g.descriptor), "size": g.size,
                        "support": f"{s.numerator}/{s.denominator}"})
    else:
        for g in granules:
            out.write(f"{g.descriptor.render(system.schema)}({g.size}) support = {float(g.support):.4f}\n")
        out.write(f"total: {len(granules)} granules\n")
    return EXIT_OK


COMMANDS = {"mine": cmd_mine, "sweep": cmd_sweep, "granules": cmd_granules}


@contextmanager
def _output(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with _output(args.out) as out:
            return COMMANDS[args.command](args, out)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); keep the interpreter quiet on exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except UsageError as exc:
        print(f"grarules: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, OSError, GranularError) as exc:
        print(f"grarules: corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS


if __name__ == "__main__":
    sys.exit(main())
