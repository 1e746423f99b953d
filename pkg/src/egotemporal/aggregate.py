"""Per-ego fan-out over a labelled cohort, per-label reduction and report files."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .egonet import build_ego_network, label_clustering_table, local_clustering_coefficient
from .temporal import (
    LifeCycle,
    LifecycleStats,
    PhaseFeatures,
    PhaseSummary,
    WindowMode,
    label_lifecycle_stats,
    label_phase_table,
    life_cycle,
    phase_features,
    phase_windows,
)
from .txmodel import AccountLabel, EgonetError, TransactionSet, format_ether

log = logging.getLogger(__name__)

ALL_MODES = (WindowMode.SLIDING, WindowMode.INCREMENTAL)


class EmptyCohortError(EgonetError):
    pass


@dataclass(frozen=True)
class EgoReport:
    ego: str
    label: AccountLabel
    k: int
    tau: float
    life: LifeCycle
    phases: dict[WindowMode, list[PhaseFeatures]]


@dataclass(frozen=True)
class LabelSummary:
    label: AccountLabel
    n_egos: int
    avg_tau: float
    lifecycle_stats: LifecycleStats
    phase_table: dict[WindowMode, list[PhaseSummary]]


def analyze_ego(ego: str, txs: TransactionSet, modes: Iterable[WindowMode] = ALL_MODES,
                label: AccountLabel = AccountLabel.UNKNOWN) -> EgoReport:
    life = life_cycle(ego, txs)
    net = build_ego_network(ego, txs)
    phases = {WindowMode(m): phase_features(net, phase_windows(life, m)) for m in modes}
    return EgoReport(ego, label, net.k, local_clustering_coefficient(net), life, phases)


# Worker-process state, set once per worker by the pool initializer.
_worker_txs: TransactionSet | None = None
_worker_modes: tuple[WindowMode, ...] = ()


def _init_worker(txs: TransactionSet, modes: tuple[WindowMode, ...]) -> None:
    global _worker_txs, _worker_modes
    _worker_txs, _worker_modes = txs, modes


def _analyze_in_worker(job: tuple[str, AccountLabel]) -> EgoReport:
    ego, label = job
    return analyze_ego(ego, _worker_txs, _worker_modes, label)


def resolve_workers(workers: int | str | None) -> int:
    """``None`` falls back to ``$EGONET_WORKERS``, then 1; ``"auto"`` means one per CPU."""
    if workers is None:
        workers = os.environ.get("EGONET_WORKERS", "1")
    if workers == "auto":
        return os.cpu_count() or 1
    n = int(workers)
    if n < 1:
        raise ValueError(f"workers must be positive, got {n}")
    return n


def analyze_egos(
    txs: TransactionSet,
    labels: Mapping[str, AccountLabel],
    modes: Iterable[WindowMode | str] = ALL_MODES,
    workers: int | str | None = 1,
) -> list[EgoReport]:
    """Per-ego reports in label-file order. Inactive labelled addresses are skipped."""
    modes = tuple(WindowMode(m) for m in modes)
    jobs = []
    for address, label in labels.items():
        if address not in txs.index:
            log.warning("skipping %s (%s): no transactions", address, label)
            continue
        jobs.append((address, label))
    if not jobs:
        raise EmptyCohortError("empty cohort: no labelled address has any transaction")

    n_workers = min(resolve_workers(workers), len(jobs))
    if n_workers == 1:
        return [analyze_ego(ego, txs, modes, label) for ego, label in jobs]
    chunksize = max(1, len(jobs) // (n_workers * 4))
    with ProcessPoolExecutor(n_workers, initializer=_init_worker, initargs=(txs, modes)) as pool:
        return list(pool.map(_analyze_in_worker, jobs, chunksize=chunksize))


def summarize(reports: Sequence[EgoReport]) -> list[LabelSummary]:
    groups: dict[AccountLabel, list[EgoReport]] = {}
    for r in reports:
        groups.setdefault(r.label, []).append(r)
    order = [label for label in AccountLabel if label in groups]
    taus = label_clustering_table({label: [r.tau for r in groups[label]] for label in order})
    lives = label_lifecycle_stats({label: [r.life for r in groups[label]] for label in order})
    modes = [m for m in ALL_MODES if any(m in r.phases for r in reports)]
    tables = {
        m: label_phase_table({label: [r.phases[m] for r in groups[label]] for label in order})
        for m in modes
    }
    return [
        LabelSummary(
            label=label,
            n_egos=len(groups[label]),
            avg_tau=taus[label],
            lifecycle_stats=lives[label],
            phase_table={m: tables[m][label] for m in modes},
        )
        for label in order
    ]


def analyze_cohort(
    txs: TransactionSet,
    labels: Mapping[str, AccountLabel],
    modes: Iterable[WindowMode | str] = ALL_MODES,
    workers: int | str | None = 1,
) -> list[LabelSummary]:
    return summarize(analyze_egos(txs, labels, modes, workers))


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.6f}"


def report_tables(summaries: Sequence[LabelSummary]) -> dict[str, list[dict[str, str]]]:
    """All report tables keyed by file stem, every cell already formatted."""
    tables: dict[str, list[dict[str, str]]] = {
        "clustering": [{"label": s.label.value, "avg_tau": _fmt(s.avg_tau)} for s in summaries],
        "lifecycle": [
            {
                "label": s.label.value,
                "median_days": _fmt(s.lifecycle_stats.median_days),
                "mean_days": _fmt(s.lifecycle_stats.mean_days),
                "max_days": _fmt(s.lifecycle_stats.max_days),
            }
            for s in summaries
        ],
    }
    modes = [m for m in ALL_MODES if any(m in s.phase_table for s in summaries)]
    for mode in modes:
        counts, amounts = [], []
        for s in summaries:
            for p in s.phase_table.get(mode, ()):
                phase = f"P{p.index}"
                counts.append({
                    "label": s.label.value,
                    "phase": phase,
                    "in_count": _fmt(p.in_count),
                    "out_count": _fmt(p.out_count),
                    "in_ratio": _fmt(p.in_ratio),
                    "out_ratio": _fmt(p.out_ratio),
                    "in_ratio_mean_of_ratios": _fmt(p.in_ratio_mean_of_ratios),
                })
                amounts.append({
                    "label": s.label.value,
                    "phase": phase,
                    "in_amount": format_ether(p.in_amount),
                    "out_amount": format_ether(p.out_amount),
                })
        tables[f"phase_counts_{mode.value}"] = counts
        tables[f"phase_amounts_{mode.value}"] = amounts
    return tables


_COLUMNS = {
    "clustering": ["label", "avg_tau"],
    "lifecycle": ["label", "median_days", "mean_days", "max_days"],
    "phase_counts": ["label", "phase", "in_count", "out_count", "in_ratio", "out_ratio", "in_ratio_mean_of_ratios"],
    "phase_amounts": ["label", "phase", "in_amount", "out_amount"],
}


def _columns(stem: str) -> list[str]:
    return _COLUMNS[stem] if stem in _COLUMNS else _COLUMNS[stem.rsplit("_", 1)[0]]


def emit_reports(summaries: Sequence[LabelSummary], out_dir: str | os.PathLike) -> set[Path]:
    """Write the CSV tables and a ``summary.json`` mirror into ``out_dir``."""
    if not summaries:
        raise EgonetError("nothing to write: no label summaries")
    out = Path(out_dir)
    tables = report_tables(summaries)
    files = {}
    for stem, rows in tables.items():
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_columns(stem), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        files[f"{stem}.csv"] = buf.getvalue()
    files["summary.json"] = json.dumps(tables, indent=2) + "\n"

    try:
        out.mkdir(parents=True, exist_ok=True)
        written = set()
        for name, text in files.items():
            path = out / name
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            written.add(path)
    except OSError as exc:
        raise EgonetError(f"cannot write reports to {out}: {exc.strerror or exc}") from exc
    return written
