"""
Life cycle and five-phase windows
=================================

Split one account's life cycle into five sliding and five incremental
phases and count its in/out transfers in each.
"""

import numpy as np

from egotemporal import WindowMode, build_ego_network, life_cycle, phase_features, phase_windows
from egotemporal.synth import generate_trace, preset
from egotemporal.txmodel import format_ether

# A phishing-shaped account: collects early, sweeps funds out at the end.
params = preset("Phish", seed=2024)
print(params.temporal_profile, "profile,", params.n_transactions, "transfers over", params.lifespan_days, "days")
trace = generate_trace(params)

life = life_cycle(trace.ego, trace.txs)
print(f"life cycle: {life.span_days:.2f} days")

net = build_ego_network(trace.ego, trace.txs)
for mode in WindowMode:
    print(f"\n{mode} windows")
    print("phase  start-offset(h)  end-offset(h)  in  out  in%     in_ETH       out_ETH")
    for w, f in zip(phase_windows(life, mode), phase_features(net, phase_windows(life, mode))):
        print(f"P{w.index}     {(w.start - life.first) / 3600:9.1f}  {(w.end - life.first) / 3600:13.1f}"
              f"  {f.in_count:3d}  {f.out_count:3d}  {100 * f.in_ratio:5.1f}  {format_ether(f.in_amount):>11.11}"
              f"  {format_ether(f.out_amount):>11.11}")

# Sliding phases partition the life cycle; their running sums reproduce the incremental phases.
sliding = phase_features(net, phase_windows(life, "sliding"))
incremental = phase_features(net, phase_windows(life, "incremental"))
print("\nprefix sums match:", np.array_equal(np.cumsum([f.total for f in sliding]), [f.total for f in incremental]))
