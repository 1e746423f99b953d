"""Seeded synthetic transaction traces shaped like the six account archetypes.

Every random quantity is drawn from a named Philox stream keyed on
``(seed, stream)``, one value per record index, so a record's draws do not
depend on how many other records are generated or in what order.
"""

from __future__ import annotations

import enum
import hashlib
import zlib
from dataclasses import asdict, dataclass, field, fields, replace
from decimal import Decimal
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .txmodel import KNOWN_LABELS, WEI_PER_ETHER, AccountLabel, TransactionRecord, TransactionSet

SECONDS_PER_DAY = 86400
N_PHASES = 5

# 2015-07-30, first Ethereum block.
GENESIS_TIMESTAMP = 1_438_269_988

# Amounts are quantized to 1e-6 Ether to keep CSVs short.
_AMOUNT_QUANTUM = 10**12
_MAX_SEED = 2**64


class TemporalProfile(str, enum.Enum):
    UNIFORM = "Uniform"
    FRONT_LOADED_IN = "FrontLoadedIn"
    STEADY_OUT = "SteadyOut"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ArchetypeParams:
    label: AccountLabel
    n_alters: int
    n_transactions: int
    in_fraction: float
    alter_link_prob: float
    lifespan_days: float
    amount_scale: Decimal
    temporal_profile: TemporalProfile = TemporalProfile.UNIFORM
    seed: int = 0
    start_timestamp: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "label", AccountLabel(self.label))
        object.__setattr__(self, "temporal_profile", TemporalProfile(self.temporal_profile))
        object.__setattr__(self, "amount_scale", Decimal(str(self.amount_scale)))
        if self.n_alters < 1 or self.n_transactions < 1:
            raise ValueError("n_alters and n_transactions must be >= 1")
        for name in ("in_fraction", "alter_link_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")
        if not self.lifespan_days > 0:
            raise ValueError("lifespan_days must be positive")
        if not self.amount_scale > 0:
            raise ValueError("amount_scale must be positive")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ArchetypeParams":
        """Apply ``name -> value`` overrides, coercing strings to the field type."""
        types = {f.name: f.type for f in fields(self)}
        coerced = {}
        for name, value in overrides.items():
            if name not in types:
                raise ValueError(f"unknown parameter {name!r}")
            if isinstance(value, str) and name in ("n_alters", "n_transactions", "seed", "start_timestamp"):
                value = int(value, 0)
            elif isinstance(value, str) and name in ("in_fraction", "alter_link_prob", "lifespan_days"):
                value = float(value)
            coerced[name] = value
        return replace(self, **coerced)


@dataclass(frozen=True)
class GroundTruth:
    """Realized quantities of one generated trace.

    ``phase_in``/``phase_out`` bucket ego-adjacent records into five equal
    slices of the nominal lifespan, counted from the generator's own draws.
    """

    ego: str
    n_alters: int
    in_count: int
    out_count: int
    in_amount: int
    out_amount: int
    alter_edges: int
    alter_records: int
    phase_in: tuple[int, ...]
    phase_out: tuple[int, ...]

    @property
    def alter_pairs(self) -> int:
        return self.n_alters * (self.n_alters - 1)


@dataclass(frozen=True)
class SyntheticTrace:
    params: ArchetypeParams
    ego: str
    txs: TransactionSet
    tally: GroundTruth


def _stream(seed: int, name: str) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, zlib.crc32(name.encode())])))


def _address(seed: int, role: str) -> str:
    return "0x" + hashlib.blake2b(f"{seed}:{role}".encode(), digest_size=20).hexdigest()


def _wei(amounts: np.ndarray) -> list[int]:
    quanta = np.maximum(np.rint(amounts * (WEI_PER_ETHER // _AMOUNT_QUANTUM)), 1).astype(np.int64)
    return [int(q) * _AMOUNT_QUANTUM for q in quanta]


def generate_trace(params: ArchetypeParams) -> SyntheticTrace:
    n = params.n_transactions
    seed = params.seed
    span = max(1, round(params.lifespan_days * SECONDS_PER_DAY))
    if params.start_timestamp is None:
        start = GENESIS_TIMESTAMP + int(_stream(seed, "start").integers(0, 4 * 365 * SECONDS_PER_DAY))
    else:
        start = params.start_timestamp
    scale = float(params.amount_scale)

    is_in = _stream(seed, "direction").random(n) < params.in_fraction

    alter_idx = _stream(seed, "alter").integers(0, params.n_alters, n)
    head = min(n, params.n_alters)
    alter_idx[:head] = np.arange(head)
    k = head

    u = _stream(seed, "time").random(n)
    profile = params.temporal_profile
    if profile is TemporalProfile.UNIFORM:
        frac = u
    elif profile is TemporalProfile.FRONT_LOADED_IN:
        # in-transfers with density 2(1-x), out-transfers with density 2x
        frac = np.where(is_in, 1.0 - np.sqrt(1.0 - u), np.sqrt(u))
    else:
        # out-transfers stratified over the record index: regular payouts
        frac = np.where(is_in, u, (np.arange(n) + u) / n)
    offsets = np.minimum(np.floor(frac * span).astype(np.int64), span - 1)
    nominal_phase = np.minimum(offsets * N_PHASES // span, N_PHASES - 1)

    amounts = _wei(_stream(seed, "amount").exponential(scale, n))

    ego = _address(seed, "ego")
    alters = [_address(seed, f"alter:{j}") for j in range(k)]

    records = []
    for i in range(n):
        other = alters[alter_idx[i]]
        t = start + int(offsets[i])
        if is_in[i]:
            records.append(TransactionRecord(other, ego, amounts[i], t))
        else:
            records.append(TransactionRecord(ego, other, amounts[i], t))

    linked = _stream(seed, "link").random((k, k)) < params.alter_link_prob
    np.fill_diagonal(linked, False)
    src, dst = np.nonzero(linked)
    n_links = len(src)
    # one or two transactions per linked pair
    multiplicity = 1 + _stream(seed, "link-multiplicity").integers(0, 2, n_links)
    m = int(multiplicity.sum())
    link_offsets = _stream(seed, "link-time").integers(0, span, m)
    link_amounts = _wei(_stream(seed, "link-amount").exponential(scale, m))
    j = 0
    for s, d, mult in zip(src, dst, multiplicity):
        for _ in range(int(mult)):
            records.append(TransactionRecord(alters[s], alters[d], link_amounts[j], start + int(link_offsets[j])))
            j += 1

    in_amount = sum(a for a, flag in zip(amounts, is_in) if flag)
    out_amount = sum(a for a, flag in zip(amounts, is_in) if not flag)
    tally = GroundTruth(
        ego=ego,
        n_alters=k,
        in_count=int(is_in.sum()),
        out_count=int(n - is_in.sum()),
        in_amount=in_amount,
        out_amount=out_amount,
        alter_edges=n_links,
        alter_records=m,
        phase_in=tuple(int(c) for c in np.bincount(nominal_phase[is_in], minlength=N_PHASES)),
        phase_out=tuple(int(c) for c in np.bincount(nominal_phase[~is_in], minlength=N_PHASES)),
    )
    return SyntheticTrace(params, ego, TransactionSet(records), tally)


_PRESETS: dict[AccountLabel, dict[str, Any]] = {
    # in-share decays from ~92% to ~61% over the life cycle
    AccountLabel.ICO: dict(
        n_alters=40, n_transactions=400, in_fraction=0.62, alter_link_prob=0.18,
        lifespan_days=420.0, amount_scale="5", temporal_profile=TemporalProfile.FRONT_LOADED_IN,
    ),
    # almost entirely out-transfers, paid out at a steady rate
    AccountLabel.MINING: dict(
        n_alters=30, n_transactions=600, in_fraction=0.0016, alter_link_prob=0.135,
        lifespan_days=646.0, amount_scale="0.5", temporal_profile=TemporalProfile.STEADY_OUT,
    ),
    # neighbours rarely trade with each other
    AccountLabel.GAMBLING: dict(
        n_alters=40, n_transactions=500, in_fraction=0.61, alter_link_prob=0.02,
        lifespan_days=293.0, amount_scale="0.8", temporal_profile=TemporalProfile.UNIFORM,
    ),
    AccountLabel.EXCHANGE: dict(
        n_alters=40, n_transactions=500, in_fraction=0.27, alter_link_prob=0.13,
        lifespan_days=603.0, amount_scale="10", temporal_profile=TemporalProfile.UNIFORM,
    ),
    AccountLabel.PONZI: dict(
        n_alters=30, n_transactions=300, in_fraction=0.30, alter_link_prob=0.04,
        lifespan_days=20.0, amount_scale="2", temporal_profile=TemporalProfile.UNIFORM,
    ),
    # collects early, sweeps out at the end
    AccountLabel.PHISH: dict(
        n_alters=20, n_transactions=120, in_fraction=0.58, alter_link_prob=0.12,
        lifespan_days=16.0, amount_scale="1.5", temporal_profile=TemporalProfile.FRONT_LOADED_IN,
    ),
}


def preset(label: AccountLabel | str, seed: int = 0) -> ArchetypeParams:
    label = AccountLabel(label)
    if label is AccountLabel.UNKNOWN:
        raise ValueError("no preset for label Unknown")
    return ArchetypeParams(label=label, seed=seed, **_PRESETS[label])


def ego_seed(seed: int, label: AccountLabel, index: int) -> int:
    """Seed of the ``index``-th ego of ``label`` within a cohort seeded by ``seed``."""
    label_code = list(AccountLabel).index(label)
    return int(np.random.SeedSequence([seed, label_code, index]).generate_state(1, np.uint64)[0])


@dataclass
class Cohort:
    traces: list[SyntheticTrace] = field(default_factory=list)

    @property
    def txs(self) -> TransactionSet:
        return TransactionSet(r for t in self.traces for r in t.txs)

    @property
    def labels(self) -> dict[str, AccountLabel]:
        return {t.ego: t.params.label for t in self.traces}

    def by_label(self) -> dict[AccountLabel, list[SyntheticTrace]]:
        groups: dict[AccountLabel, list[SyntheticTrace]] = {}
        for t in self.traces:
            groups.setdefault(t.params.label, []).append(t)
        return groups


def generate_cohort(
    labels: Iterable[AccountLabel | str] = KNOWN_LABELS,
    n_egos: int = 50,
    seed: int = 0,
    overrides: Mapping[str, Any] | None = None,
) -> Cohort:
    """``n_egos`` preset traces per label, each with its own derived seed."""
    cohort = Cohort()
    for label in labels:
        base = preset(label)
        if overrides:
            base = base.with_overrides(overrides)
        for j in range(n_egos):
            params = replace(base, seed=ego_seed(seed, base.label, j))
            cohort.traces.append(generate_trace(params))
    return cohort


def _jsonable(params: ArchetypeParams) -> dict[str, Any]:
    d = asdict(params)
    d["label"] = params.label.value
    d["temporal_profile"] = params.temporal_profile.value
    d["amount_scale"] = str(params.amount_scale)
    return d


def cohort_tally(cohort: Cohort, seed: int | None = None) -> dict[str, Any]:
    """JSON-ready ground truth: pooled per label plus one entry per ego."""
    labels = {}
    for label, traces in cohort.by_label().items():
        tallies = [t.tally for t in traces]
        phase_in = [sum(t.phase_in[i] for t in tallies) for i in range(N_PHASES)]
        phase_out = [sum(t.phase_out[i] for t in tallies) for i in range(N_PHASES)]
        labels[label.value] = {
            "n_egos": len(traces),
            "in_count": sum(t.in_count for t in tallies),
            "out_count": sum(t.out_count for t in tallies),
            "alter_edges": sum(t.alter_edges for t in tallies),
            "alter_pairs": sum(t.alter_pairs for t in tallies),
            "mean_tau": sum(t.alter_edges / t.alter_pairs if t.alter_pairs else 0.0 for t in tallies) / len(tallies),
            "phase_in": phase_in,
            "phase_out": phase_out,
        }
    egos = [
        {
            "address": t.ego,
            "label": t.params.label.value,
            "params": _jsonable(t.params),
            **{k: v for k, v in asdict(t.tally).items() if k not in ("ego", "in_amount", "out_amount")},
            "phase_in": list(t.tally.phase_in),
            "phase_out": list(t.tally.phase_out),
        }
        for t in cohort.traces
    ]
    return {"seed": seed, "labels": labels, "egos": egos}


def realized_phase_ratios(tally: Mapping[str, Any], cumulative: bool = False) -> list[float | None]:
    """Pooled in-share per nominal phase from a :func:`cohort_tally` label entry."""
    ins: Sequence[int] = tally["phase_in"]
    outs: Sequence[int] = tally["phase_out"]
    if cumulative:
        ins = np.cumsum(ins).tolist()
        outs = np.cumsum(outs).tolist()
    return [i / (i + o) if i + o else None for i, o in zip(ins, outs)]
