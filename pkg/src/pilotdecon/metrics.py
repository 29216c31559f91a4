"""Performance metrics and numerical checkers for the asymptotic claims.

The error metric is the normalized squared estimation error averaged over
all (base station, user) pairs; the rate metric is the uplink per-cell sum
rate of a maximum-ratio combiner built from the estimates, with true
channels in the interference terms. The theorem checkers evaluate, per
scenario or per realization, the strict conditions under which the
covariance-aided and subspace projections decontaminate asymptotically.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import analytic_covariance, decompose_by_support
from .linalg import hermitian_eig, spectral_norm

# Reported dB floor for an exactly zero error.
ERROR_FLOOR_DB = -200.0


def _vec(channel):
    return channel.vector if hasattr(channel, "vector") else np.asarray(channel)


# ---------------------------------------------------------------------------
# Error and rate
# ---------------------------------------------------------------------------

def normalized_error(estimates, true_channels):
    """Mean over (j, k) of ||h_hat - h||^2 / ||h||^2 (linear scale).

    ``estimates`` and ``true_channels`` are mappings with identical keys.
    Pairs with an exactly zero true channel are excluded with a warning.
    """
    ratios = []
    for key, estimate in estimates.items():
        truth = _vec(true_channels[key])
        power = float(np.vdot(truth, truth).real)
        if power == 0.0:
            warnings.warn(f"zero true channel for {key}; excluded from the error")
            continue
        diff = np.asarray(estimate) - truth
        ratios.append(float(np.vdot(diff, diff).real) / power)
    if not ratios:
        raise ValueError("no nonzero true channels to evaluate")
    return float(np.mean(ratios))


def to_db(value, floor_db=ERROR_FLOOR_DB):
    """10 log10 with a finite floor for exact zeros."""
    if value <= 0.0:
        return floor_db
    return max(10.0 * np.log10(value), floor_db)


def percell_rate_mrc(estimates, channels, noise_variance, num_cells, users_per_cell):
    """Per-cell uplink sum rate with an MRC combiner from the estimates.

    The combiner for user (j, k) is its estimate; the SINR uses the true
    channels of every user toward base station j in the cross terms. The
    result is averaged over cells; an all-zero combiner contributes zero.
    The rate is invariant to any positive scaling of the estimates.
    """
    rates = []
    for j in range(num_cells):
        cell_rate = 0.0
        for k in range(users_per_cell):
            combiner = np.asarray(estimates[(j, k)])
            energy = float(np.vdot(combiner, combiner).real)
            if energy == 0.0:
                continue
            signal = abs(np.vdot(combiner, _vec(channels[(j, k, j)]))) ** 2
            interference = 0.0
            for l in range(num_cells):
                for kp in range(users_per_cell):
                    if (l, kp) == (j, k):
                        continue
                    interference += abs(np.vdot(combiner, _vec(channels[(l, kp, j)]))) ** 2
            sinr = signal / (interference + noise_variance * energy)
            cell_rate += np.log2(1.0 + sinr)
        rates.append(cell_rate)
    return float(np.mean(rates))


# ---------------------------------------------------------------------------
# Asymptotic functionals and theorem conditions
# ---------------------------------------------------------------------------

def compute_alpha(cov, user=0):
    """Finite-M proxy of the per-cell filtered-energy functional.

    alpha_l = tr(Xi R_l Xi^H) / M for every cell l, with Xi the spatial
    filter of the target user. Which cell's alpha dominates decides whose
    channel direction survives the filtered-data eigendecomposition.
    """
    xi, _ = cov.filters(user)
    m = cov.num_antennas
    return np.array([
        float(np.sum((xi @ cov.covariances[(l, user)]) * xi.conj()).real) / m
        for l in cov.cells
    ])


@dataclass(frozen=True)
class TheoremCheck:
    """Strict predicate outcome with the margins behind it."""

    holds: bool
    margins: np.ndarray

    def __bool__(self):
        return self.holds


def check_theorem1(alpha, target_cell):
    """Strictly largest filtered energy for the target cell.

    ``alpha`` is indexed by cell; margins are alpha_target - alpha_l for
    the interfering cells. A single-cell scenario holds vacuously.
    """
    alpha = np.asarray(alpha, dtype=float)
    others = np.delete(alpha, target_cell)
    margins = alpha[target_cell] - others
    return TheoremCheck(holds=bool(np.all(margins > 0.0)), margins=margins)


def check_theorem2(target_channel, interferers, xi, geom, target_support):
    """Filtered in-support interference strictly below the filtered target.

    For every interferer, the component of its realization whose paths fall
    inside the target's angular support must, after the spatial filter, be
    weaker than the filtered desired channel.
    """
    reference = np.linalg.norm(xi @ _vec(target_channel))
    margins = []
    for real in interferers.values():
        h_in, _ = decompose_by_support(real, geom, target_support)
        margins.append(reference - np.linalg.norm(xi @ h_in))
    margins = np.asarray(margins)
    return TheoremCheck(holds=bool(np.all(margins > 0.0)), margins=margins)


def check_theorem3(target_channel, interferers, geom, target_support):
    """In-support interference strictly below the target, unfiltered."""
    reference = np.linalg.norm(_vec(target_channel))
    margins = []
    for real in interferers.values():
        h_in, _ = decompose_by_support(real, geom, target_support)
        margins.append(reference - np.linalg.norm(h_in))
    margins = np.asarray(margins)
    return TheoremCheck(holds=bool(np.all(margins > 0.0)), margins=margins)


@dataclass(frozen=True)
class TheoremDiagnostics:
    """Per-realization snapshot of the quantities behind the theorems."""

    alpha: np.ndarray              # filtered energy functional per cell
    covariance_norms: np.ndarray   # ||R_l||_2 per cell
    filter_gram_norm: float        # ||Xi Xi^H||_2
    filtered_in_energy: np.ndarray  # ||Xi h_{l,in}||^2 per interferer
    raw_in_energy: np.ndarray       # ||h_{l,in}||^2 per interferer
    theorem1: bool
    theorem2: bool
    theorem3: bool


def compute_diagnostics(cov, user, target_channel, interferers, geom, target_support):
    """Assemble the theorem diagnostics for one realization."""
    xi, _ = cov.filters(user)
    alpha = compute_alpha(cov, user)
    t1 = check_theorem1(alpha, cov.target_cell)
    t2 = check_theorem2(target_channel, interferers, xi, geom, target_support)
    t3 = check_theorem3(target_channel, interferers, geom, target_support)
    filtered_in, raw_in = [], []
    for real in interferers.values():
        h_in, _ = decompose_by_support(real, geom, target_support)
        filtered_in.append(float(np.linalg.norm(xi @ h_in) ** 2))
        raw_in.append(float(np.linalg.norm(h_in) ** 2))
    return TheoremDiagnostics(
        alpha=alpha,
        covariance_norms=np.array(
            [spectral_norm(cov.covariances[(l, user)]) for l in cov.cells]
        ),
        filter_gram_norm=spectral_norm(xi @ xi.conj().T),
        filtered_in_energy=np.asarray(filtered_in),
        raw_in_energy=np.asarray(raw_in),
        theorem1=t1.holds,
        theorem2=t2.holds,
        theorem3=t3.holds,
    )


def spectral_growth_diagnostic(profile, geom_or_spacing, m_grid, quad_points=None):
    """Largest covariance eigenvalue across array sizes.

    Accepts either an ArrayGeometry (its spacing is reused) or a bare
    spacing ratio. Returns {M: lambda_1} in grid order.
    """
    from .channel import ArrayGeometry

    spacing = getattr(geom_or_spacing, "spacing_ratio", geom_or_spacing)
    table = {}
    for m in m_grid:
        geom = ArrayGeometry(int(m), spacing)
        kwargs = {} if quad_points is None else {"quad_points": quad_points}
        cov = analytic_covariance(profile, geom, **kwargs)
        table[int(m)] = float(hermitian_eig(cov.matrix).eigenvalues[0])
    return table
