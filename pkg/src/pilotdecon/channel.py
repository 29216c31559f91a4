"""Multipath channel model for a uniform linear array.

A channel between a user and a base station is a sum of P equal-power
plane-wave paths,

    h = (beta / sqrt(P)) * sum_p a(theta_p) * exp(i phi_p),

with angles of arrival drawn uniformly over a bounded angular support and
phases uniform over [0, 2pi). The spatial covariance E{h h^H} of such a
channel is Toeplitz for a ULA and is computed here either analytically
(quadrature over the angular density) or empirically (sample average).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import InvalidInputError
from .linalg import hermitian_eig

# Default number of quadrature points for the covariance integral.
QUAD_POINTS = 512
# Points per Gauss-Legendre panel of the composite rule.
_PANEL_ORDER = 16


# ---------------------------------------------------------------------------
# Geometry and statistical link description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: antenna count and spacing in wavelengths."""

    num_antennas: int
    spacing_ratio: float = 0.5

    def __post_init__(self):
        if self.num_antennas < 1:
            raise InvalidInputError("num_antennas must be >= 1")
        if not 0.0 < self.spacing_ratio <= 0.5:
            raise InvalidInputError(
                f"spacing_ratio must lie in (0, 0.5], got {self.spacing_ratio}"
            )


@dataclass(frozen=True)
class AngularSupport:
    """Uniform angular density on [center - half_spread, center + half_spread].

    The interval is clipped to [0, pi] and the density renormalized over the
    clipped interval.
    """

    center: float
    half_spread: float

    def __post_init__(self):
        if not 0.0 < self.center < np.pi:
            raise InvalidInputError(f"center must lie in (0, pi), got {self.center}")
        if not 0.0 <= self.half_spread <= np.pi / 2:
            raise InvalidInputError(
                f"half_spread must lie in [0, pi/2], got {self.half_spread}"
            )

    @property
    def lower(self):
        return max(0.0, self.center - self.half_spread)

    @property
    def upper(self):
        return min(np.pi, self.center + self.half_spread)

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, theta):
        """Membership test, inclusive at the endpoints. Accepts arrays."""
        return (np.asarray(theta) >= self.lower) & (np.asarray(theta) <= self.upper)

    def overlap(self, other):
        """Width of the intersection with another support, in radians."""
        return max(0.0, min(self.upper, other.upper) - max(self.lower, other.lower))

    def sample(self, rng, size=None):
        """Draw AoAs uniformly over the (clipped) support."""
        if self.width == 0.0:
            return np.full(size, self.lower) if size is not None else self.lower
        return rng.uniform(self.lower, self.upper, size=size)


@dataclass(frozen=True)
class LinkProfile:
    """Statistical description of one user-to-base-station link."""

    beta: float
    support: AngularSupport
    num_paths: int

    def __post_init__(self):
        if self.beta <= 0.0:
            raise InvalidInputError(f"beta must be positive, got {self.beta}")
        if self.num_paths < 1:
            raise InvalidInputError("num_paths must be >= 1")


@dataclass(frozen=True)
class ChannelRealization:
    """One drawn channel vector together with its per-path records.

    ``path_gain`` is beta/sqrt(P); retaining it makes the realization
    self-contained for per-path reconstruction and support decomposition.
    """

    vector: np.ndarray  # (M,) complex
    aoas: np.ndarray    # (P,) radians
    phases: np.ndarray  # (P,) radians
    path_gain: float

    @property
    def paths(self):
        """Per-path (aoa, phase) pairs as an iterable of tuples."""
        return list(zip(self.aoas, self.phases))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Hermitian PSD spatial covariance with provenance."""

    matrix: np.ndarray
    source: str                    # "analytic" or "empirical"
    sample_count: int | None = None


# ---------------------------------------------------------------------------
# Steering vectors and path loss
# ---------------------------------------------------------------------------

def steering_vector(geom, theta):
    """Array phase-response vector for a path arriving from angle theta.

    Entry m is exp(-j 2 pi (D/lambda) m cos(theta)); every entry has unit
    modulus, so ||a||^2 = M exactly.
    """
    if not 0.0 <= theta <= np.pi:
        raise InvalidInputError(
            f"theta must lie in [0, pi]; fold negative angles first (got {theta})"
        )
    m = np.arange(geom.num_antennas)
    return np.exp(-2j * np.pi * geom.spacing_ratio * m * np.cos(theta))


def steering_matrix(geom, thetas):
    """Steering vectors for a batch of angles, one per column: (M, n)."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < 0.0) or np.any(thetas > np.pi):
        raise InvalidInputError("all angles must lie in [0, pi]")
    m = np.arange(geom.num_antennas)
    return np.exp(-2j * np.pi * geom.spacing_ratio * np.outer(m, np.cos(thetas)))


def path_loss(alpha, gamma, distance):
    """Amplitude path-loss coefficient beta = sqrt(alpha / d^gamma)."""
    if distance <= 0.0:
        raise InvalidInputError(f"distance must be positive, got {distance}")
    if alpha <= 0.0 or gamma < 0.0:
        raise InvalidInputError("alpha must be > 0 and gamma >= 0")
    return float(np.sqrt(alpha / distance**gamma))


# ---------------------------------------------------------------------------
# Channel draws
# ---------------------------------------------------------------------------

def draw_channel(profile, geom, rng):
    """Draw one channel realization, keeping the per-path records."""
    p = profile.num_paths
    aoas = np.asarray(profile.support.sample(rng, size=p), dtype=float)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=p)
    gain = profile.beta / np.sqrt(p)
    vector = gain * steering_matrix(geom, aoas) @ np.exp(1j * phases)
    return ChannelRealization(vector=vector, aoas=aoas, phases=phases, path_gain=gain)


def draw_channel_matrix(profile, geom, count, rng):
    """Draw ``count`` independent channels as columns of an (M, count) array.

    Batched equivalent of repeated draw_channel calls without the per-path
    bookkeeping; the random draws are NOT stream-compatible with
    draw_channel, so use one or the other for a given purpose.
    """
    p = profile.num_paths
    aoas = np.asarray(profile.support.sample(rng, size=(count, p)), dtype=float)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(count, p))
    gain = profile.beta / np.sqrt(p)
    # Antenna m sees sum_p base_p^m coeff_p; accumulate the unit-modulus
    # powers iteratively instead of exponentiating per (draw, path, antenna).
    base = np.exp(-2j * np.pi * geom.spacing_ratio * np.cos(aoas))
    acc = np.exp(1j * phases)
    out = np.empty((geom.num_antennas, count), dtype=complex)
    out[0] = acc.sum(axis=1)
    for m in range(1, geom.num_antennas):
        acc *= base
        out[m] = acc.sum(axis=1)
    return gain * out


def draw_gaussian_channel(covariance, rng, count=1, rel_tol=0.0):
    """Correlated Gaussian draws h = R^(1/2) z with z ~ CN(0, I).

    The square root keeps the eigenmodes whose eigenvalue exceeds
    ``rel_tol`` times the largest (all non-negative modes by default), so
    every draw lies in the signal space of the covariance. Returns an
    (M, count) array.
    """
    matrix = covariance.matrix if hasattr(covariance, "matrix") else covariance
    eig = hermitian_eig(matrix)
    keep = eig.eigenvalues > rel_tol * max(eig.eigenvalues[0], 0.0)
    if not keep.any():
        return np.zeros((matrix.shape[0], count), dtype=complex)
    basis = eig.eigenvectors[:, keep]
    scale = np.sqrt(eig.eigenvalues[keep])
    z = (rng.standard_normal((keep.sum(), count))
         + 1j * rng.standard_normal((keep.sum(), count))) / np.sqrt(2.0)
    return basis @ (scale[:, None] * z)


# ---------------------------------------------------------------------------
# Spatial covariance
# ---------------------------------------------------------------------------

def _composite_gauss_legendre(lower, upper, points):
    """Nodes/weights of a composite Gauss-Legendre rule on [lower, upper]."""
    panels = max(1, int(np.ceil(points / _PANEL_ORDER)))
    base_x, base_w = np.polynomial.legendre.leggauss(_PANEL_ORDER)
    edges = np.linspace(lower, upper, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    weights = (half[:, None] * base_w[None, :]).ravel()
    return nodes, weights


def analytic_covariance(profile, geom, quad_points=QUAD_POINTS):
    """Spatial covariance by quadrature over the uniform angular density.

    The result is Hermitian Toeplitz with first row
    r(k) = beta^2 * mean over the support of exp(j 2 pi (D/lambda) k cos t),
    so that r(0) = beta^2. A zero-spread support short-circuits to the exact
    rank-1 matrix beta^2 a(t0) a(t0)^H.
    """
    if quad_points < 64:
        raise InvalidInputError("quad_points must be >= 64")
    m = geom.num_antennas
    beta_sq = profile.beta**2
    sup = profile.support
    if sup.width == 0.0:
        a = steering_vector(geom, sup.center)
        matrix = beta_sq * np.outer(a, a.conj())
        return CovarianceMatrix(matrix=0.5 * (matrix + matrix.conj().T), source="analytic")
    nodes, weights = _composite_gauss_legendre(sup.lower, sup.upper, quad_points)
    weights = weights / sup.width  # uniform density over the clipped support
    lags = np.arange(m)
    first_row = beta_sq * np.exp(
        2j * np.pi * geom.spacing_ratio * np.outer(lags, np.cos(nodes))
    ) @ weights
    # R[i, j] = r(j - i); the first column is the conjugate of the first row.
    matrix = scipy.linalg.toeplitz(np.conj(first_row), first_row)
    return CovarianceMatrix(matrix=matrix, source="analytic")


def empirical_covariance(samples):
    """Sample covariance (1/N) sum h h^H, symmetrized.

    ``samples`` may be a sequence of ChannelRealization or a complex
    (M, N) array with one draw per column.
    """
    if isinstance(samples, np.ndarray):
        if samples.ndim != 2 or samples.shape[1] == 0:
            raise InvalidInputError("need a (M, N) array with N >= 1")
        stack = samples
    else:
        if len(samples) == 0:
            raise InvalidInputError("need at least one channel sample")
        stack = np.stack([s.vector for s in samples], axis=1)
    n = stack.shape[1]
    matrix = (stack @ stack.conj().T) / n
    matrix = 0.5 * (matrix + matrix.conj().T)
    return CovarianceMatrix(matrix=matrix, source="empirical", sample_count=n)


def clip_to_psd(cov, rel_floor=1e-10):
    """Zero out tiny negative eigenvalues of a nominally PSD covariance."""
    eig = hermitian_eig(cov.matrix)
    w = eig.eigenvalues
    if w[0] <= 0.0 or w[-1] >= 0.0:
        return cov
    if w[-1] < -rel_floor * w[0]:
        raise InvalidInputError(
            f"covariance has a significantly negative eigenvalue {w[-1]:.3e}"
        )
    wc = np.clip(w, 0.0, None)
    fixed = (eig.eigenvectors * wc) @ eig.eigenvectors.conj().T
    return CovarianceMatrix(
        matrix=0.5 * (fixed + fixed.conj().T),
        source=cov.source,
        sample_count=cov.sample_count,
    )


# ---------------------------------------------------------------------------
# Support decomposition (in/out of a target angular region)
# ---------------------------------------------------------------------------

def decompose_by_support(real, geom, target):
    """Split a realization into path sums inside/outside a target support.

    Returns (h_in, h_out) with h_in + h_out equal to the stored vector, where
    h_in collects the paths whose AoA falls inside ``target`` (inclusive).
    """
    inside = target.contains(real.aoas)
    coeff = np.exp(1j * real.phases)
    m = geom.num_antennas
    steer = steering_matrix(geom, real.aoas)
    h_in = real.path_gain * (steer[:, inside] @ coeff[inside]) if inside.any() \
        else np.zeros(m, dtype=complex)
    outside = ~inside
    h_out = real.path_gain * (steer[:, outside] @ coeff[outside]) if outside.any() \
        else np.zeros(m, dtype=complex)
    return h_in, h_out
