"""Ego network construction and the directed local clustering coefficient."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from statistics import fmean
from typing import Iterable, Mapping, Union

from .txmodel import AccountLabel, TransactionRecord, TransactionSet


@dataclass(frozen=True)
class EgoNetwork:
    """An account (the ego), its direct counterparties (alters) and the edges among them.

    ``edges`` holds every non-self transaction whose endpoints both lie in
    ``{ego} | alters``, in timestamp order. ``distinct_alter_edges`` collapses
    alter-to-alter transactions to one ordered pair each.
    """

    ego: str
    alters: frozenset[str]
    edges: tuple[TransactionRecord, ...]
    distinct_alter_edges: frozenset[tuple[str, str]]

    @property
    def k(self) -> int:
        return len(self.alters)

    @property
    def ego_edges(self) -> tuple[TransactionRecord, ...]:
        """Edges with the ego at one end."""
        ego = self.ego
        return tuple(r for r in self.edges if r.sender == ego or r.receiver == ego)

    @property
    def alter_edges(self) -> tuple[TransactionRecord, ...]:
        ego = self.ego
        return tuple(r for r in self.edges if r.sender != ego and r.receiver != ego)


def build_ego_network(ego: str, txs: TransactionSet) -> EgoNetwork:
    index = txs.index
    records = txs.records

    alters: set[str] = set()
    positions: set[int] = set()
    for pos in index.get(ego, ()):
        rec = records[pos]
        if rec.is_self_transfer:
            continue
        alters.add(rec.receiver if rec.sender == ego else rec.sender)
        positions.add(pos)

    pairs: set[tuple[str, str]] = set()
    for alter in alters:
        for pos in index[alter]:
            rec = records[pos]
            if rec.is_self_transfer or rec.sender == ego or rec.receiver == ego:
                continue
            if rec.sender in alters and rec.receiver in alters:
                positions.add(pos)
                pairs.add((rec.sender, rec.receiver))

    return EgoNetwork(
        ego=ego,
        alters=frozenset(alters),
        edges=tuple(records[p] for p in sorted(positions)),
        distinct_alter_edges=frozenset(pairs),
    )


def clustering_fraction(net: EgoNetwork) -> Fraction:
    """Exact form of :func:`local_clustering_coefficient`."""
    k = net.k
    if k <= 1:
        return Fraction(0)
    return Fraction(len(net.distinct_alter_edges), k * (k - 1))


def local_clustering_coefficient(net: EgoNetwork) -> float:
    """Share of ordered alter pairs ``(u, v)`` with at least one ``u -> v`` transaction.

    Mutual pairs count twice, parallel transactions once. Returns 0 when the
    ego has fewer than two alters.
    """
    return float(clustering_fraction(net))


def label_clustering_table(
    groups: Mapping[AccountLabel, Iterable[Union[EgoNetwork, float]]],
) -> dict[AccountLabel, float]:
    """Unweighted mean coefficient per label; empty groups are left out.

    Group members may be networks or precomputed coefficients.
    """
    table = {}
    for label, members in groups.items():
        taus = [
            m if isinstance(m, (int, float, Fraction)) else local_clustering_coefficient(m)
            for m in members
        ]
        if taus:
            table[label] = fmean(taus)
    return table
