from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from egotemporal.egonet import (
    build_ego_network,
    clustering_fraction,
    label_clustering_table,
    local_clustering_coefficient,
)
from egotemporal.txmodel import AccountLabel, TransactionRecord, TransactionSet

from conftest import tx
from oracles import brute_clustering


def _net(ego, *edges):
    return build_ego_network(ego, TransactionSet(tx(u, v) for u, v in edges))


def test_single_edge():
    net = _net("a", ("a", "b"))
    assert net.alters == {"b"}
    assert len(net.ego_edges) == 1
    assert net.distinct_alter_edges == frozenset()


def test_triangle():
    net = _net("a", ("a", "b"), ("a", "c"), ("b", "c"))
    assert net.alters == {"b", "c"}
    assert net.distinct_alter_edges == {("b", "c")}
    assert local_clustering_coefficient(net) == 0.5


def test_unrelated_edge_excluded():
    net = _net("a", ("a", "b"), ("c", "d"))
    assert net.alters == {"b"}
    assert [(r.sender, r.receiver) for r in net.edges] == [("a", "b")]


def test_in_and_out_neighbours_both_count():
    net = _net("a", ("b", "a"), ("a", "c"))
    assert net.alters == {"b", "c"}


def test_self_transfers_excluded():
    net = _net("a", ("a", "a"), ("a", "b"), ("b", "b"), ("c", "a"))
    assert net.ego not in net.alters
    assert all(r.sender != r.receiver for r in net.edges)
    assert len(net.edges) == 2


def test_edge_to_outsider_excluded():
    net = _net("a", ("a", "b"), ("b", "z"))
    assert net.alters == {"b"}
    assert len(net.edges) == 1


def test_empty_network():
    net = build_ego_network("nobody", TransactionSet([tx("a", "b")]))
    assert net.k == 0 and not net.edges
    assert local_clustering_coefficient(net) == 0.0


def test_star_is_zero():
    assert local_clustering_coefficient(_net("e", ("e", "a"), ("b", "e"), ("e", "c"))) == 0.0


def test_mutual_pair_is_one():
    net = _net("a", ("a", "b"), ("a", "c"), ("b", "c"), ("c", "b"))
    assert clustering_fraction(net) == 1
    assert local_clustering_coefficient(net) == 1.0


def test_single_alter_is_zero():
    assert local_clustering_coefficient(_net("a", ("a", "b"), ("b", "a"))) == 0.0


def test_multi_edges_collapse():
    net = _net("a", ("a", "b"), ("a", "c"), ("b", "c"), ("b", "c"), ("b", "c"))
    assert len(net.alter_edges) == 3
    assert clustering_fraction(net) == Fraction(1, 2)


def test_every_alter_touches_ego():
    rng = np.random.default_rng(3)
    for _ in range(50):
        nodes = [f"n{i}" for i in range(12)]
        recs = [TransactionRecord(nodes[u], nodes[v], 1, int(t))
                for u, v, t in rng.integers(0, 12, (60, 3))]
        net = build_ego_network("n0", TransactionSet(recs))
        touching = {r.receiver if r.sender == "n0" else r.sender for r in net.ego_edges}
        assert touching == net.alters
        for r in net.edges:
            assert {r.sender, r.receiver} <= net.alters | {"n0"}


def _random_digraph(rng, n, p):
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    return [(f"v{u}", f"v{v}") for u, v in zip(*np.nonzero(adj))]


def test_random_graph_matches_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        edges = _random_digraph(rng, 10, 0.35)
        net = build_ego_network("v0", TransactionSet(tx(u, v) for u, v in edges))
        assert clustering_fraction(net) == brute_clustering("v0", edges)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=60))
def test_property_oracle_and_bounds(pairs):
    edges = [(f"v{u}", f"v{v}") for u, v in pairs]
    net = build_ego_network("v0", TransactionSet(tx(u, v) for u, v in edges))
    frac = clustering_fraction(net)
    assert frac == brute_clustering("v0", edges)
    assert 0 <= frac <= 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=40),
       st.integers(0, 39), st.integers(0, 10**6), st.integers(1, 1000))
def test_property_duplication_shift_scale_invariant(pairs, dup, shift, factor):
    recs = [TransactionRecord(f"v{u}", f"v{v}", 10**15 * (i + 1), 100 + i) for i, (u, v) in enumerate(pairs)]
    base = clustering_fraction(build_ego_network("v0", TransactionSet(recs)))
    duplicated = recs + [recs[dup % len(recs)]]
    assert clustering_fraction(build_ego_network("v0", TransactionSet(duplicated))) == base
    moved = [TransactionRecord(r.sender, r.receiver, r.amount * factor, r.timestamp + shift) for r in recs]
    assert clustering_fraction(build_ego_network("v0", TransactionSet(moved))) == base


def test_adding_new_alter_edge_strictly_increases():
    rng = np.random.default_rng(5)
    for _ in range(100):
        edges = _random_digraph(rng, 8, 0.3)
        net = build_ego_network("v0", TransactionSet(tx(u, v) for u, v in edges))
        if net.k < 2:
            continue
        alters = sorted(net.alters)
        missing = [(u, v) for u in alters for v in alters if u != v and (u, v) not in net.distinct_alter_edges]
        if not missing:
            continue
        u, v = missing[rng.integers(len(missing))]
        grown = build_ego_network("v0", TransactionSet(tx(a, b) for a, b in edges + [(u, v)]))
        assert grown.alters == net.alters
        assert clustering_fraction(grown) > clustering_fraction(net)


def test_label_table_means():
    table = label_clustering_table({AccountLabel.ICO: [0.0, 1.0], AccountLabel.PHISH: [0.25]})
    assert table == {AccountLabel.ICO: 0.5, AccountLabel.PHISH: 0.25}


def test_label_table_accepts_networks_and_omits_empty():
    net = _net("a", ("a", "b"), ("a", "c"), ("b", "c"))
    table = label_clustering_table({AccountLabel.MINING: [net], AccountLabel.PONZI: []})
    assert table == {AccountLabel.MINING: pytest.approx(0.5)}
