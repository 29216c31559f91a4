"""Shared helpers for the test suite."""

import numpy as np
import pytest

from pilotdecon import AngularSupport, ArrayGeometry, LinkProfile, analytic_covariance
from pilotdecon.estimators import CovarianceSet


@pytest.fixture
def rng():
    return np.random.default_rng(20160211)


def crandn(rng, *shape):
    """Unit-variance circularly symmetric complex Gaussian array."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_psd(rng, size, rank=None):
    """Random Hermitian PSD matrix, optionally rank-deficient."""
    rank = size if rank is None else rank
    a = crandn(rng, size, rank)
    return a @ a.conj().T


def profile(center_deg, spread_deg, beta=1.0, paths=50):
    return LinkProfile(
        beta=beta,
        support=AngularSupport(np.deg2rad(center_deg), np.deg2rad(spread_deg) / 2.0),
        num_paths=paths,
    )


def two_cell_cov_set(num_antennas, target_profile, interferer_profile, noise_variance=1.0):
    """Covariance set of a 2-cell single-user scenario at the target BS."""
    geom = ArrayGeometry(num_antennas)
    return CovarianceSet(
        covariances={
            (0, 0): analytic_covariance(target_profile, geom).matrix,
            (1, 0): analytic_covariance(interferer_profile, geom).matrix,
        },
        noise_variance=noise_variance,
        target_cell=0,
    )
