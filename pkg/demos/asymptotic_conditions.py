"""Walkthrough: the quantities that decide when decontamination succeeds.

The covariance-aided estimator removes interference asymptotically when
the target cell's filtered-energy functional (alpha) strictly dominates
every interferer's, or per realization when the filtered in-support
interference stays below the filtered desired channel.

Run with: python3 demos/asymptotic_conditions.py
"""

import numpy as np

from pilotdecon import preset
from pilotdecon.harness import build_covariance_sets, trial_rng
from pilotdecon.metrics import (
    check_theorem1,
    check_theorem2,
    check_theorem3,
    compute_alpha,
)
from pilotdecon.signals import draw_block_channels

# ---------------------------------------------------------------------------
# The alpha functional: tr(Xi R_l Xi^H) / M per cell. The spatial filter
# passes the target's energy and squeezes whatever part of the interference
# lies outside the target's angular support.
# ---------------------------------------------------------------------------
for m in (32, 128, 512):
    scenario = preset("fig1").with_antennas(m)
    covariances = build_covariance_sets(scenario, "analytic", master_seed=0)
    alpha = compute_alpha(covariances[0], 0)
    check = check_theorem1(alpha, 0)
    print(f"M={m:4d}  alpha(target)={alpha[0]:.4f}  alpha(interferer)={alpha[1]:.4f}"
          f"  dominance margin {check.margins[0]:+.4f}  -> {'holds' if check.holds else 'fails'}")

print("""
With half-overlapping supports the margin is positive and stabilizes as M
grows, which is why the covariance-aided error keeps falling where the
other estimators saturate.
""")

# ---------------------------------------------------------------------------
# Per-realization conditions. The filtered comparison (theorem-2 style) is
# much easier to satisfy than the unfiltered one (theorem-3 style): the
# filter already removed the out-of-support interference energy.
# ---------------------------------------------------------------------------
m = 10
scenario = preset("fig1").with_antennas(m)
covariances = build_covariance_sets(scenario, "analytic", master_seed=0)
xi, _ = covariances[0].filters(0)
support = scenario.profiles[(0, 0, 0)].support

filtered_hits, raw_hits, trials = 0, 0, 400
for trial in range(trials):
    channels = draw_block_channels(scenario, trial_rng(0, m, trial))
    target = channels[(0, 0, 0)]
    interferers = {1: channels[(1, 0, 0)]}
    filtered_hits += check_theorem2(target, interferers, xi, scenario.geometry, support).holds
    raw_hits += check_theorem3(target, interferers, scenario.geometry, support).holds

print(f"at M={m}, over {trials} blocks:")
print(f"  filtered in-support interference below desired: {filtered_hits / trials:.2%}")
print(f"  raw      in-support interference below desired: {raw_hits / trials:.2%}")
