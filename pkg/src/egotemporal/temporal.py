"""Life cycles, five-phase sliding/incremental windows and per-phase features."""

from __future__ import annotations

import enum
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from statistics import fmean, median
from typing import Iterable, Mapping, Sequence

from .egonet import EgoNetwork
from .txmodel import AccountLabel, EgonetError, TransactionSet

SECONDS_PER_DAY = 86400
N_PHASES = 5


class NoActivityError(EgonetError, LookupError):
    """The account has no transactions."""


class WindowMode(str, enum.Enum):
    SLIDING = "sliding"
    INCREMENTAL = "incremental"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LifeCycle:
    first: int
    last: int

    def __post_init__(self):
        if self.last < self.first:
            raise ValueError("last precedes first")

    @property
    def span(self) -> int:
        return self.last - self.first

    @property
    def span_days(self) -> float:
        return self.span / SECONDS_PER_DAY


@dataclass(frozen=True)
class PhaseWindow:
    """Interval ``[start, end)``, or ``[start, end]`` when ``closed`` (the final phase)."""

    index: int
    start: int
    end: int
    mode: WindowMode
    closed: bool = False

    def __contains__(self, t: int) -> bool:
        if self.closed:
            return self.start <= t <= self.end
        return self.start <= t < self.end


@dataclass(frozen=True)
class PhaseFeatures:
    index: int
    in_count: int = 0
    out_count: int = 0
    in_amount: int = 0
    out_amount: int = 0

    @property
    def total(self) -> int:
        return self.in_count + self.out_count

    @property
    def in_ratio(self) -> float:
        return self.in_count / self.total if self.total else 0.0

    @property
    def out_ratio(self) -> float:
        return self.out_count / self.total if self.total else 0.0


def life_cycle(ego: str, txs: TransactionSet) -> LifeCycle:
    positions = txs.index.get(ego)
    if not positions:
        raise NoActivityError(f"no activity for {ego}")
    # positions are in timestamp order
    return LifeCycle(txs.records[positions[0]].timestamp, txs.records[positions[-1]].timestamp)


def _round_half_up(x: Fraction) -> int:
    return (x.numerator * 2 + x.denominator) // (2 * x.denominator)


def phase_boundaries(span: int, n_phases: int = N_PHASES) -> list[int]:
    """Offsets ``round(i * span / n)`` for ``i = 0..n``, rounded half up."""
    return [_round_half_up(Fraction(i * span, n_phases)) for i in range(n_phases + 1)]


def phase_windows(life: LifeCycle, mode: WindowMode | str, n_phases: int = N_PHASES) -> list[PhaseWindow]:
    mode = WindowMode(mode)
    b = phase_boundaries(life.span, n_phases)
    t1 = life.first
    windows = []
    for i in range(n_phases):
        start = t1 + b[i] if mode is WindowMode.SLIDING else t1
        windows.append(PhaseWindow(i, start, t1 + b[i + 1], mode, closed=i == n_phases - 1))
    return windows


class _Side:
    """Sorted timestamps plus amount prefix sums for one transfer direction."""

    def __init__(self, records):
        self.times = [r.timestamp for r in records]
        self.cum = [0, *accumulate(r.amount for r in records)]

    def window(self, w: PhaseWindow) -> tuple[int, int]:
        lo = bisect_left(self.times, w.start)
        hi = bisect_right(self.times, w.end) if w.closed else bisect_left(self.times, w.end)
        hi = max(hi, lo)
        return hi - lo, self.cum[hi] - self.cum[lo]


def phase_features(net: EgoNetwork, windows: Sequence[PhaseWindow]) -> list[PhaseFeatures]:
    """Count and sum the ego's in/out transfers inside each window.

    Only ego-adjacent edges contribute; alter-to-alter traffic is ignored.
    """
    ego_edges = net.ego_edges
    incoming = _Side([r for r in ego_edges if r.receiver == net.ego])
    outgoing = _Side([r for r in ego_edges if r.sender == net.ego])
    out = []
    for w in windows:
        n_in, a_in = incoming.window(w)
        n_out, a_out = outgoing.window(w)
        out.append(PhaseFeatures(w.index, n_in, n_out, a_in, a_out))
    return out


@dataclass(frozen=True)
class LifecycleStats:
    n_egos: int
    median_days: float
    mean_days: float
    max_days: float


def label_lifecycle_stats(groups: Mapping[AccountLabel, Iterable[LifeCycle]]) -> dict[AccountLabel, LifecycleStats]:
    table = {}
    for label, lives in groups.items():
        days = [life.span / SECONDS_PER_DAY for life in lives]
        if days:
            table[label] = LifecycleStats(len(days), median(days), fmean(days), max(days))
    return table


@dataclass(frozen=True)
class PhaseSummary:
    """Cohort-level view of one phase.

    ``in_ratio``/``out_ratio`` are pooled (summed counts, then divided) and
    are ``None`` when the cohort has no transactions in the phase.
    ``in_ratio_mean_of_ratios`` averages the per-ego ratio over egos active
    in the phase. Mean amounts are rounded to the nearest Wei.
    """

    index: int
    n_egos: int
    total_in_count: int
    total_out_count: int
    total_in_amount: int
    total_out_amount: int
    in_ratio_mean_of_ratios: float | None

    @property
    def in_count(self) -> float:
        return self.total_in_count / self.n_egos

    @property
    def out_count(self) -> float:
        return self.total_out_count / self.n_egos

    @property
    def in_amount(self) -> int:
        return _round_half_up(Fraction(self.total_in_amount, self.n_egos))

    @property
    def out_amount(self) -> int:
        return _round_half_up(Fraction(self.total_out_amount, self.n_egos))

    @property
    def in_ratio(self) -> float | None:
        total = self.total_in_count + self.total_out_count
        return self.total_in_count / total if total else None

    @property
    def out_ratio(self) -> float | None:
        total = self.total_in_count + self.total_out_count
        return self.total_out_count / total if total else None


def summarize_phases(per_ego: Sequence[Sequence[PhaseFeatures]]) -> list[PhaseSummary]:
    if not per_ego:
        raise ValueError("no egos to summarize")
    n_phases = len(per_ego[0])
    if any(len(f) != n_phases for f in per_ego):
        raise ValueError("every ego must contribute the same number of phases")
    rows = []
    for i in range(n_phases):
        phase = [f[i] for f in per_ego]
        active = [p.in_ratio for p in phase if p.total]
        rows.append(
            PhaseSummary(
                index=i,
                n_egos=len(phase),
                total_in_count=sum(p.in_count for p in phase),
                total_out_count=sum(p.out_count for p in phase),
                total_in_amount=sum(p.in_amount for p in phase),
                total_out_amount=sum(p.out_amount for p in phase),
                in_ratio_mean_of_ratios=fmean(active) if active else None,
            )
        )
    return rows


def label_phase_table(
    groups: Mapping[AccountLabel, Sequence[Sequence[PhaseFeatures]]],
) -> dict[AccountLabel, list[PhaseSummary]]:
    return {label: summarize_phases(per_ego) for label, per_ego in groups.items() if per_ego}
