"""Command-line driver: ``egonet analyze | generate | ego``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import synth
from .aggregate import ALL_MODES, analyze_ego, analyze_cohort, emit_reports
from .temporal import WindowMode, phase_windows
from .txmodel import KNOWN_LABELS, EgonetError, format_ether, ingest_labels, ingest_transactions, write_labels, write_transactions

EXIT_OK, EXIT_INPUT, EXIT_USAGE = 0, 1, 2


def _modes(choice: str) -> tuple[WindowMode, ...]:
    return ALL_MODES if choice == "both" else (WindowMode(choice),)


def _workers(text: str) -> int | str:
    if text == "auto":
        return text
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}")
    return n


def _param(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def _seed(text: str) -> int:
    n = int(text, 0)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egonet",
        description="Temporal ego-network features of labelled transaction accounts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-label report tables for a labelled cohort")
    p.add_argument("--tx", required=True, type=Path, help="transactions CSV (from,to,value,timestamp)")
    p.add_argument("--labels", required=True, type=Path, help="labels CSV (address,label)")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--mode", choices=["sliding", "incremental", "both"], default="both")
    p.add_argument("--keep-zero-value", action=argparse.BooleanOptionalAction, default=True,
                   help="keep zero-value transactions (default: keep)")
    p.add_argument("--workers", type=_workers, default=None,
                   help="worker processes, or 'auto' (default: $EGONET_WORKERS or 1)")

    g = sub.add_parser("generate", help="write a synthetic labelled cohort")
    g.add_argument("--out", required=True, type=Path)
    g.add_argument("--label", action="append", choices=[label.value for label in KNOWN_LABELS],
                   help="preset label, repeatable (default: all six)")
    g.add_argument("--egos", type=int, default=50, help="egos per label")
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--param", action="append", type=_param, default=[], metavar="KEY=VALUE",
                   help="override a preset parameter, repeatable")

    e = sub.add_parser("ego", help="print one account's features as CSV")
    e.add_argument("--tx", required=True, type=Path)
    e.add_argument("--address", required=True)
    e.add_argument("--mode", choices=["sliding", "incremental", "both"], default="both")
    e.add_argument("--keep-zero-value", action=argparse.BooleanOptionalAction, default=True)
    return parser


def cmd_analyze(args) -> int:
    txs = ingest_transactions(args.tx, keep_zero_value=args.keep_zero_value)
    labels = ingest_labels(args.labels)
    summaries = analyze_cohort(txs, labels, _modes(args.mode), workers=args.workers)
    for path in sorted(emit_reports(summaries, args.out)):
        print(path)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.egos < 1:
        raise _UsageError("--egos must be positive")
    labels = args.label or [label.value for label in KNOWN_LABELS]
    try:
        cohort = synth.generate_cohort(labels, args.egos, args.seed, dict(args.param))
    except (TypeError, ValueError) as exc:
        raise _UsageError(str(exc)) from None
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "transactions.csv", "w", encoding="utf-8", newline="") as fh:
        write_transactions(cohort.txs, fh)
    with open(out / "labels.csv", "w", encoding="utf-8", newline="") as fh:
        write_labels(cohort.labels, fh)
    with open(out / "tally.json", "w", encoding="utf-8", newline="") as fh:
        json.dump(synth.cohort_tally(cohort, args.seed), fh, indent=2)
        fh.write("\n")
    for name in ("transactions.csv", "labels.csv", "tally.json"):
        print(out / name)
    return EXIT_OK


def cmd_ego(args) -> int:
    txs = ingest_transactions(args.tx, keep_zero_value=args.keep_zero_value)
    modes = _modes(args.mode)
    report = analyze_ego(args.address, txs, modes)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["address", "k", "tau", "first", "last", "span_days", "mode", "phase", "start", "end",
                     "in_count", "out_count", "in_ratio", "out_ratio", "in_amount", "out_amount"])
    life = report.life
    for mode in modes:
        for w, f in zip(phase_windows(life, mode), report.phases[mode]):
            writer.writerow([
                report.ego, report.k, f"{report.tau:.6f}", life.first, life.last, f"{life.span_days:.6f}",
                mode.value, f"P{f.index}", w.start, w.end, f.in_count, f.out_count,
                f"{f.in_ratio:.6f}", f"{f.out_ratio:.6f}", format_ether(f.in_amount), format_ether(f.out_amount),
            ])
    return EXIT_OK


class _UsageError(Exception):
    pass


_COMMANDS = {"analyze": cmd_analyze, "generate": cmd_generate, "ego": cmd_ego}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"egonet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EgonetError, OSError) as exc:
        print(f"egonet {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
