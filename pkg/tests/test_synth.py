from dataclasses import replace

import pytest

from egotemporal.egonet import build_ego_network, clustering_fraction
from egotemporal.synth import (
    ArchetypeParams,
    TemporalProfile,
    cohort_tally,
    generate_cohort,
    generate_trace,
    preset,
    realized_phase_ratios,
)
from egotemporal.txmodel import KNOWN_LABELS, AccountLabel, ingest_transactions, transactions_to_csv


def _params(**kw):
    base = dict(label=AccountLabel.ICO, n_alters=5, n_transactions=10, in_fraction=0.5,
                alter_link_prob=0.3, lifespan_days=10, amount_scale="1", seed=1)
    base.update(kw)
    return ArchetypeParams(**base)


def test_all_in():
    trace = generate_trace(_params(in_fraction=1.0))
    assert (trace.tally.in_count, trace.tally.out_count) == (10, 0)


def test_all_out():
    trace = generate_trace(_params(in_fraction=0.0))
    assert (trace.tally.in_count, trace.tally.out_count) == (0, 10)


def test_no_links_zero_clustering():
    trace = generate_trace(_params(alter_link_prob=0.0, n_alters=15, n_transactions=100))
    assert clustering_fraction(build_ego_network(trace.ego, trace.txs)) == 0


def test_full_links_unit_clustering():
    trace = generate_trace(_params(alter_link_prob=1.0, n_alters=6, n_transactions=30))
    net = build_ego_network(trace.ego, trace.txs)
    assert clustering_fraction(net) == 1
    assert trace.tally.alter_edges == 30


def test_byte_identical_serialization():
    p = preset(AccountLabel.PHISH, seed=99)
    assert transactions_to_csv(generate_trace(p).txs) == transactions_to_csv(generate_trace(p).txs)


def test_seed_changes_trace():
    a = generate_trace(preset(AccountLabel.PONZI, seed=1))
    b = generate_trace(preset(AccountLabel.PONZI, seed=2))
    assert a.txs != b.txs


def test_exact_ego_adjacent_count_and_tally_matches_network():
    trace = generate_trace(preset(AccountLabel.EXCHANGE, seed=4))
    net = build_ego_network(trace.ego, trace.txs)
    assert len(net.ego_edges) == trace.params.n_transactions
    assert net.k == trace.tally.n_alters == trace.params.n_alters
    assert len(net.distinct_alter_edges) == trace.tally.alter_edges
    assert sum(r.receiver == trace.ego for r in net.ego_edges) == trace.tally.in_count
    assert sum(r.amount for r in net.ego_edges if r.receiver == trace.ego) == trace.tally.in_amount
    assert sum(trace.tally.phase_in) == trace.tally.in_count
    assert sum(trace.tally.phase_out) == trace.tally.out_count


def test_fewer_transactions_than_alters():
    trace = generate_trace(_params(n_alters=50, n_transactions=7))
    assert build_ego_network(trace.ego, trace.txs).k == 7 == trace.tally.n_alters


def test_timestamps_within_lifespan():
    p = _params(n_transactions=500, lifespan_days=3, start_timestamp=1_000_000)
    trace = generate_trace(p)
    assert all(1_000_000 <= r.timestamp < 1_000_000 + 3 * 86400 for r in trace.txs)


@pytest.mark.parametrize("target", [0.0016, 0.3, 0.61, 0.92])
def test_in_fraction_converges(target):
    trace = generate_trace(_params(n_transactions=10_000, in_fraction=target, alter_link_prob=0.0, seed=3))
    assert abs(trace.tally.in_count / 10_000 - target) <= 0.015


def test_round_trip_ingestion():
    for label in KNOWN_LABELS:
        trace = generate_trace(preset(label, seed=5))
        assert ingest_transactions(transactions_to_csv(trace.txs).encode()) == trace.txs


def test_front_loaded_profile_shape():
    p = _params(n_transactions=4000, in_fraction=0.6, temporal_profile=TemporalProfile.FRONT_LOADED_IN)
    t = generate_trace(p).tally
    share = [i / (i + o) for i, o in zip(t.phase_in, t.phase_out)]
    assert share[0] > 0.85 and share[-1] < 0.35
    assert share == sorted(share, reverse=True)


def test_steady_out_spreads_payouts():
    p = _params(n_transactions=1000, in_fraction=0.0, temporal_profile=TemporalProfile.STEADY_OUT)
    assert generate_trace(p).tally.phase_out == (200, 200, 200, 200, 200)


def test_presets():
    assert preset(AccountLabel.MINING).in_fraction == pytest.approx(0.0016)
    assert preset(AccountLabel.PONZI).in_fraction == pytest.approx(0.30)
    assert preset(AccountLabel.GAMBLING).alter_link_prob < 0.05
    assert preset(AccountLabel.PHISH).temporal_profile is TemporalProfile.FRONT_LOADED_IN
    assert preset(AccountLabel.ICO).alter_link_prob == max(preset(lb).alter_link_prob for lb in KNOWN_LABELS)
    for label in KNOWN_LABELS:
        assert preset(label).n_alters >= 15


def test_unknown_preset_rejected():
    with pytest.raises(ValueError):
        preset(AccountLabel.UNKNOWN)


@pytest.mark.parametrize("bad", [
    dict(in_fraction=1.5), dict(alter_link_prob=-0.1), dict(n_alters=0), dict(n_transactions=0),
    dict(lifespan_days=0), dict(amount_scale="0"), dict(seed=-1), dict(seed=2**64),
])
def test_invalid_params(bad):
    with pytest.raises(ValueError):
        _params(**bad)


def test_overrides_coerce_strings():
    p = preset(AccountLabel.ICO).with_overrides({"n_alters": "16", "in_fraction": "0.5", "amount_scale": "2.5"})
    assert (p.n_alters, p.in_fraction, str(p.amount_scale)) == (16, 0.5, "2.5")
    with pytest.raises(ValueError):
        preset(AccountLabel.ICO).with_overrides({"bogus": 1})


def test_cohort_deterministic_and_distinct_egos():
    a = generate_cohort([AccountLabel.PONZI, AccountLabel.PHISH], n_egos=3, seed=7)
    b = generate_cohort([AccountLabel.PONZI, AccountLabel.PHISH], n_egos=3, seed=7)
    assert a.txs == b.txs
    assert len(set(a.labels)) == 6
    # each ego's draws do not depend on how many siblings were generated
    c = generate_cohort([AccountLabel.PONZI], n_egos=1, seed=7)
    assert c.traces[0].txs == a.traces[0].txs


def test_cohort_tally_pools_per_label():
    cohort = generate_cohort([AccountLabel.ICO], n_egos=4, seed=1)
    tally = cohort_tally(cohort, seed=1)["labels"]["ICO"]
    assert tally["n_egos"] == 4
    assert tally["in_count"] + tally["out_count"] == 4 * preset(AccountLabel.ICO).n_transactions
    ratios = realized_phase_ratios(tally, cumulative=True)
    assert ratios[-1] == pytest.approx(tally["in_count"] / (tally["in_count"] + tally["out_count"]))


def test_trace_params_are_immutable():
    p = preset(AccountLabel.ICO)
    with pytest.raises(Exception):
        p.n_alters = 3
    assert replace(p, seed=3).seed == 3
