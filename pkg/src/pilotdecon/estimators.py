"""Channel estimators operating on one base station's received blocks.

All estimators are pure functions of (training block Y, data block W, pilot
book, statistical side information); repeated invocation on the same inputs
is bit-identical. Estimates are returned per target user together with a
small diagnostic payload.

Estimator family:
  ls    least squares on the pilot block
  mmse  linear MMSE weighting by covariance ratios
  am    projection onto the dominant eigenspace of the data covariance
  ca    covariance-aided amplitude projection (spatial pre-filter, dominant
        eigenvector, filter reversal, pilot-based phase/amplitude fix)
  sa    projection onto the signal space of the target covariance, then
        amplitude projection
  ma    MMSE estimate projected onto the data-derived dominant eigenspace
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, DegenerateInputError
from .linalg import PINV_RTOL, hermitian_eig, pseudo_inverse, solve_hpd

# Eigenvector-selection design parameter for the amplitude-based methods.
DEFAULT_MU = 0.2
# Fraction of covariance trace retained by the signal-space projection.
DEFAULT_ENERGY_FRACTION = 0.999
# Gram-matrix condition limit beyond which the ZF filter falls back to pinv.
ZF_CONDITION_LIMIT = 1e12

ESTIMATOR_TAGS = ("ls", "mmse", "am", "ca", "sa", "ma")


@dataclass(frozen=True)
class EstimateSet:
    """Per-user channel estimates from one estimator at one base station."""

    vectors: dict   # target user k -> (M,) complex estimate
    estimator: str
    diagnostics: dict = field(default_factory=dict)

    def vector(self, user=0):
        return self.vectors[user]


@dataclass
class CovarianceSet:
    """Covariances of every user toward one base station, plus noise power.

    ``covariances`` maps (cell l, user k) to the M x M covariance of the
    channel from that user to this base station; ``target_cell`` marks which
    cell's users this base station estimates. Spatial filters are cached per
    user since they depend only on this long-term information.
    """

    covariances: dict
    noise_variance: float
    target_cell: int
    _filters: dict = field(default_factory=dict, repr=False)

    @property
    def num_antennas(self):
        return next(iter(self.covariances.values())).shape[0]

    @property
    def cells(self):
        return sorted({l for (l, _) in self.covariances})

    def target(self, user):
        return self.covariances[(self.target_cell, user)]

    def interference_sum(self, user):
        """Sum over cells of the covariances of the pilot-sharing users."""
        return sum(self.covariances[(l, user)] for l in self.cells)

    def filters(self, user):
        if user not in self._filters:
            self._filters[user] = spatial_filters(self, user)
        return self._filters[user]


# ---------------------------------------------------------------------------
# Linear estimators
# ---------------------------------------------------------------------------

def ls_estimate(training, pilots):
    """Least-squares estimate (1/tau) Y S^H; exact for orthogonal pilots."""
    ls = training @ pilots.matrix.conj().T / pilots.length
    return EstimateSet(
        vectors={k: ls[:, k] for k in range(pilots.num_users)}, estimator="ls"
    )


def mmse_estimate(training, pilots, cov):
    """Linear MMSE estimate per user.

    With orthogonal pilots the stacked multi-user form decouples into
    h_k = R_target_k (tau sum_l R_lk + sigma^2 I)^{-1} Y s_k^*.
    """
    tau = pilots.length
    m = training.shape[0]
    vectors = {}
    for k in range(pilots.num_users):
        gram = tau * cov.interference_sum(k) + cov.noise_variance * np.eye(m)
        correlated = training @ pilots.sequence(k).conj()
        vectors[k] = cov.target(k) @ solve_hpd(gram, correlated)
    return EstimateSet(vectors=vectors, estimator="mmse")


# ---------------------------------------------------------------------------
# Amplitude-based projection
# ---------------------------------------------------------------------------

def select_signal_basis(data, num_users, mu=DEFAULT_MU):
    """Dominant eigenvectors of the instantaneous data covariance.

    Eigendecomposes W W^H / C and keeps every eigenvector whose eigenvalue
    exceeds mu times the num_users-th largest one, so at least the strongest
    num_users directions survive whenever that eigenvalue is positive.
    Returns (basis, kappa, eigenvalues).
    """
    if not 0.0 <= mu < 1.0:
        raise ConfigurationError(f"mu must lie in [0, 1), got {mu}")
    m, c = data.shape
    if num_users > m:
        raise ConfigurationError(f"num_users {num_users} exceeds antennas {m}")
    eig = hermitian_eig(data @ data.conj().T / c)
    threshold = mu * eig.eigenvalues[num_users - 1]
    kappa = int(np.sum(eig.eigenvalues > threshold))
    return eig.eigenvectors[:, :kappa], kappa, eig.eigenvalues


def amplitude_estimate(training, data, pilots, mu=DEFAULT_MU):
    """Project the LS estimate onto the dominant data eigenspace."""
    basis, kappa, eigenvalues = select_signal_basis(data, pilots.num_users, mu)
    ls = training @ pilots.matrix.conj().T / pilots.length
    projected = basis @ (basis.conj().T @ ls)
    return EstimateSet(
        vectors={k: projected[:, k] for k in range(pilots.num_users)},
        estimator="am",
        diagnostics={"kappa": kappa, "eigenvalues": eigenvalues[: kappa + 2]},
    )


# ---------------------------------------------------------------------------
# Covariance-aided amplitude projection
# ---------------------------------------------------------------------------

def spatial_filters(cov, user=0):
    """Long-term spatial filter and its reversal for one target user.

    Xi      = (sum_l R_l + sigma^2 I)^{-1} R_target
    Xi_rev  = R_target^dagger (sum_l R_l + sigma^2 I)

    Xi suppresses interference directions while keeping the target signal
    space recoverable: Xi_rev Xi h = h for any h in the signal space of
    R_target.
    """
    m = cov.num_antennas
    gram = cov.interference_sum(user) + cov.noise_variance * np.eye(m)
    target = cov.target(user)
    xi = solve_hpd(gram, target)
    xi_rev = pseudo_inverse(target, PINV_RTOL) @ gram
    return xi, xi_rev


def _dominant_direction(filtered_data):
    """Normalized dominant eigenvector of (1/C) filtered filtered^H."""
    c = filtered_data.shape[1]
    eig = hermitian_eig(filtered_data @ filtered_data.conj().T / c)
    if eig.eigenvalues[0] <= 0.0:
        raise DegenerateInputError("filtered data block has no signal energy")
    return eig.eigenvectors[:, 0], eig.eigenvalues


def _pilot_phase_fix(direction, training, pilot_sequence, tau):
    """Resolve phase/amplitude by projecting the LS estimate on a direction."""
    return direction * (direction.conj() @ (training @ pilot_sequence.conj())) / tau


def ca_estimate_single(training, data, pilots, cov):
    """Covariance-aided amplitude projection for one user per cell.

    1. Filter the data block with Xi and take the dominant eigenvector of
       its instantaneous covariance.
    2. Reverse the spatial filter and renormalize to get the channel
       direction.
    3. Resolve phase and amplitude against the pilot block.
    """
    if pilots.num_users != 1:
        raise ConfigurationError("ca_estimate_single requires one user per cell")
    xi, xi_rev = cov.filters(0)
    direction, eigenvalues = _dominant_direction(xi @ data)
    reversed_direction = xi_rev @ direction
    norm = np.linalg.norm(reversed_direction)
    if norm == 0.0:
        raise DegenerateInputError("filter reversal annihilated the direction")
    unit = reversed_direction / norm
    estimate = _pilot_phase_fix(unit, training, pilots.sequence(0), pilots.length)
    return EstimateSet(
        vectors={0: estimate},
        estimator="ca",
        diagnostics={"dominant_eigenvalues": eigenvalues[:3]},
    )


def zf_complement_projector(estimated_others):
    """Projector onto the orthogonal complement of the given column span.

    Falls back to a pseudo-inverse Gram solve when the Gram matrix is
    ill-conditioned; the second return value flags that fallback.
    """
    m = estimated_others.shape[0]
    gram = estimated_others.conj().T @ estimated_others
    fallback = bool(np.linalg.cond(gram) > ZF_CONDITION_LIMIT)
    inv = np.linalg.pinv(gram) if fallback else np.linalg.inv(gram)
    projector = np.eye(m) - estimated_others @ inv @ estimated_others.conj().T
    return projector, fallback


def ca_estimate_multi(training, data, pilots, cov, target_user):
    """Covariance-aided amplitude projection with intra-cell zero forcing.

    The co-cell users' LS estimates are nulled from the data block before
    the spatial filter of the target user is applied; the remaining steps
    match the single-user algorithm.
    """
    if pilots.num_users == 1:
        if target_user != 0:
            raise ConfigurationError("target_user out of range")
        return ca_estimate_single(training, data, pilots, cov)
    ls = ls_estimate(training, pilots)
    others = np.stack(
        [ls.vector(k) for k in range(pilots.num_users) if k != target_user], axis=1
    )
    zf, fallback = zf_complement_projector(others)
    xi, xi_rev = cov.filters(target_user)
    direction, eigenvalues = _dominant_direction(xi @ (zf @ data))
    reversed_direction = xi_rev @ direction
    norm = np.linalg.norm(reversed_direction)
    if norm == 0.0:
        raise DegenerateInputError("filter reversal annihilated the direction")
    unit = reversed_direction / norm
    estimate = _pilot_phase_fix(
        unit, training, pilots.sequence(target_user), pilots.length
    )
    return EstimateSet(
        vectors={target_user: estimate},
        estimator="ca",
        diagnostics={
            "dominant_eigenvalues": eigenvalues[:3],
            "zf_pseudo_inverse": fallback,
        },
    )


def ca_estimate(training, data, pilots, cov):
    """All target users via the single- or multi-user CA algorithm."""
    if pilots.num_users == 1:
        return ca_estimate_single(training, data, pilots, cov)
    vectors = {}
    diagnostics = {}
    for k in range(pilots.num_users):
        part = ca_estimate_multi(training, data, pilots, cov, k)
        vectors[k] = part.vector(k)
        diagnostics[k] = part.diagnostics
    return EstimateSet(vectors=vectors, estimator="ca", diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Low-complexity alternatives
# ---------------------------------------------------------------------------

def signal_space_basis(target_covariance, energy_fraction=DEFAULT_ENERGY_FRACTION):
    """Leading eigenvectors capturing the requested fraction of the trace."""
    eig = hermitian_eig(target_covariance)
    positive = np.clip(eig.eigenvalues, 0.0, None)
    total = positive.sum()
    if total <= 0.0:
        raise DegenerateInputError("covariance has no positive eigenvalues")
    rank = int(np.searchsorted(np.cumsum(positive), energy_fraction * total) + 1)
    rank = min(rank, len(positive))
    return eig.eigenvectors[:, :rank], rank


def sa_estimate(training, data, pilots, target_covariance,
                energy_fraction=DEFAULT_ENERGY_FRACTION):
    """Subspace-plus-amplitude projection (single user per cell).

    Projects the data block onto the signal space of the target covariance,
    takes the dominant eigenvector of the projected data covariance, and
    resolves phase/amplitude against the pilot block. Needs no interference
    statistics and no noise variance.
    """
    if pilots.num_users != 1:
        raise ConfigurationError("sa_estimate requires one user per cell")
    basis, rank = signal_space_basis(target_covariance, energy_fraction)
    projected = basis @ (basis.conj().T @ data)
    direction, eigenvalues = _dominant_direction(projected)
    estimate = _pilot_phase_fix(direction, training, pilots.sequence(0), pilots.length)
    return EstimateSet(
        vectors={0: estimate},
        estimator="sa",
        diagnostics={"rank": rank, "dominant_eigenvalues": eigenvalues[:3]},
    )


def ma_estimate(training, data, pilots, cov, mu=DEFAULT_MU):
    """MMSE estimate projected onto the dominant data eigenspace.

    The same data-derived basis is applied to every user's MMSE estimate
    (block-diagonal structure of the stacked estimator).
    """
    basis, kappa, eigenvalues = select_signal_basis(data, pilots.num_users, mu)
    mmse = mmse_estimate(training, pilots, cov)
    vectors = {
        k: basis @ (basis.conj().T @ mmse.vector(k))
        for k in range(pilots.num_users)
    }
    return EstimateSet(
        vectors=vectors,
        estimator="ma",
        diagnostics={"kappa": kappa, "eigenvalues": eigenvalues[: kappa + 2]},
    )


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def estimate(tag, training, data, pilots, cov, mu=DEFAULT_MU,
             energy_fraction=DEFAULT_ENERGY_FRACTION):
    """Run the estimator named by ``tag`` on one base station's blocks."""
    if tag == "ls":
        return ls_estimate(training, pilots)
    if tag == "mmse":
        return mmse_estimate(training, pilots, cov)
    if tag == "am":
        return amplitude_estimate(training, data, pilots, mu)
    if tag == "ca":
        return ca_estimate(training, data, pilots, cov)
    if tag == "sa":
        return sa_estimate(training, data, pilots, cov.target(0), energy_fraction)
    if tag == "ma":
        return ma_estimate(training, data, pilots, cov, mu)
    raise ConfigurationError(
        f"unknown estimator {tag!r}; available: {', '.join(ESTIMATOR_TAGS)}"
    )
