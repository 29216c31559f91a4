"""Walkthrough: steering vectors, multipath channels, and spatial covariances.

Run with: python3 demos/array_and_covariance.py
"""

import numpy as np
import scipy.special

from pilotdecon import (
    AngularSupport,
    ArrayGeometry,
    LinkProfile,
    analytic_covariance,
    draw_channel,
    draw_channel_matrix,
    empirical_covariance,
    steering_vector,
)
from pilotdecon.linalg import hermitian_eig
from pilotdecon.metrics import spectral_growth_diagnostic

rng = np.random.default_rng(0)

# ---------------------------------------------------------------------------
# A uniform linear array responds to a plane wave with a unit-modulus
# phase ramp; its energy is exactly M for every arrival angle.
# ---------------------------------------------------------------------------
geom = ArrayGeometry(num_antennas=8, spacing_ratio=0.5)
for theta_deg in (0, 60, 90):
    a = steering_vector(geom, np.deg2rad(theta_deg))
    print(f"theta={theta_deg:3d} deg  first entries {np.round(a[:3], 3)}  "
          f"||a||^2 = {np.vdot(a, a).real:.1f}")

# ---------------------------------------------------------------------------
# A channel is a sum of 50 equal-power paths with AoAs uniform over a
# bounded support. Its mean energy is beta^2 M.
# ---------------------------------------------------------------------------
profile = LinkProfile(
    beta=1.0,
    support=AngularSupport(center=np.deg2rad(75), half_spread=np.deg2rad(15)),
    num_paths=50,
)
h = draw_channel(profile, geom, rng)
print(f"\none draw: ||h||^2 = {np.vdot(h.vector, h.vector).real:.2f} "
      f"(mean over draws approaches {geom.num_antennas})")

# ---------------------------------------------------------------------------
# The spatial covariance E[h h^H] is Toeplitz for a ULA. Quadrature over
# the angular density and a sample average over draws agree; for the full
# [0, pi] support the lags are Bessel J0 values.
# ---------------------------------------------------------------------------
analytic = analytic_covariance(profile, geom).matrix
sample = empirical_covariance(draw_channel_matrix(profile, geom, 20000, rng)).matrix
rel = np.linalg.norm(analytic - sample) / np.linalg.norm(analytic)
print(f"\nanalytic vs 2e4-sample covariance: relative deviation {rel:.3f}")

full = LinkProfile(1.0, AngularSupport(np.pi / 2, np.pi / 2), 50)
lags = analytic_covariance(full, geom).matrix[0].real
print("full-support lags     ", np.round(lags[:5], 4))
print("Bessel J0(pi k) oracle", np.round(scipy.special.j0(np.pi * np.arange(5)), 4))

# ---------------------------------------------------------------------------
# A bounded angular support keeps the covariance spectral norm bounded as
# the array grows; a zero-spread (rank-1) support scales it like beta^2 M.
# The narrow support also concentrates the energy in few eigenmodes, which
# is what the subspace projections exploit.
# ---------------------------------------------------------------------------
print("\nlargest covariance eigenvalue vs array size")
bounded = spectral_growth_diagnostic(profile, 0.5, [32, 64, 128, 256])
point = spectral_growth_diagnostic(
    LinkProfile(1.0, AngularSupport(np.deg2rad(75), 0.0), 50), 0.5, [32, 64, 128, 256]
)
print("  M        :", list(bounded))
print("  bounded  :", [round(v, 2) for v in bounded.values()])
print("  rank-one :", [round(v, 2) for v in point.values()])

w = hermitian_eig(analytic_covariance(profile, ArrayGeometry(64)).matrix).eigenvalues
effective_rank = int(np.sum(np.cumsum(w) <= 0.999 * w.sum()) + 1)
print(f"\nat M=64 the 30-degree-spread covariance packs 99.9% of its energy "
      f"into {effective_rank} of 64 eigenmodes")
