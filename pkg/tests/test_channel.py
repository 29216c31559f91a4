"""Tests for steering vectors, channel draws, and spatial covariances."""

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from pilotdecon import (
    AngularSupport,
    ArrayGeometry,
    LinkProfile,
    analytic_covariance,
    decompose_by_support,
    draw_channel,
    draw_channel_matrix,
    empirical_covariance,
    path_loss,
    steering_vector,
)
from pilotdecon.exceptions import InvalidInputError
from pilotdecon.linalg import hermitian_eig

from conftest import profile


# ============================================================================
# STEERING VECTORS AND PATH LOSS
# ============================================================================


class TestSteeringVector:
    def test_broadside_all_ones(self):
        a = steering_vector(ArrayGeometry(4, 0.5), np.pi / 2)
        assert np.allclose(a, np.ones(4))

    def test_endfire_alternating(self):
        a = steering_vector(ArrayGeometry(4, 0.5), 0.0)
        assert np.allclose(a, [1, -1, 1, -1])

    def test_unit_modulus_and_energy(self):
        a = steering_vector(ArrayGeometry(8, 0.5), np.pi / 3)
        assert np.allclose(np.abs(a), 1.0)
        assert np.vdot(a, a).real == pytest.approx(8.0)

    def test_energy_exact_over_angles(self):
        geom = ArrayGeometry(17, 0.37)
        for theta in np.linspace(0.0, np.pi, 11):
            a = steering_vector(geom, theta)
            assert np.vdot(a, a).real == pytest.approx(17.0)

    def test_angle_domain_enforced(self):
        with pytest.raises(InvalidInputError):
            steering_vector(ArrayGeometry(4), -0.1)
        with pytest.raises(InvalidInputError):
            steering_vector(ArrayGeometry(4), np.pi + 0.1)


class TestPathLoss:
    def test_inverse_square(self):
        assert path_loss(1.0, 2.0, 100.0) == pytest.approx(0.01)

    def test_gamma_zero_is_flat(self):
        assert path_loss(1.0, 0.0, 123.0) == pytest.approx(1.0)

    def test_kilometer(self):
        assert path_loss(1.0, 2.0, 1000.0) == pytest.approx(1e-3)

    def test_zero_distance_rejected(self):
        with pytest.raises(InvalidInputError):
            path_loss(1.0, 2.0, 0.0)


# ============================================================================
# CHANNEL DRAWS
# ============================================================================


class TestDrawChannel:
    def test_single_path_point_support(self, rng):
        prof = LinkProfile(beta=2.0, support=AngularSupport(np.pi / 3, 0.0), num_paths=1)
        real = draw_channel(prof, ArrayGeometry(6), rng)
        assert np.allclose(np.abs(real.vector), 2.0)
        assert real.aoas[0] == pytest.approx(np.pi / 3)

    def test_reconstruction_from_paths(self, rng):
        """The stored vector equals the path sum it claims to be."""
        prof = profile(80.0, 40.0, beta=0.7, paths=12)
        geom = ArrayGeometry(9)
        real = draw_channel(prof, geom, rng)
        rebuilt = real.path_gain * sum(
            steering_vector(geom, aoa) * np.exp(1j * phase)
            for aoa, phase in real.paths
        )
        assert np.linalg.norm(rebuilt - real.vector) <= 1e-12 * np.linalg.norm(real.vector)

    def test_mean_energy_oracle(self, rng):
        """E||h||^2 = beta^2 M since every steering vector has energy M."""
        prof = profile(90.0, 60.0, beta=1.5)
        geom = ArrayGeometry(16)
        draws = draw_channel_matrix(prof, geom, 10_000, rng)
        energy = np.mean(np.sum(np.abs(draws) ** 2, axis=0))
        assert energy == pytest.approx(1.5**2 * 16, rel=0.03)

    def test_deterministic_given_seed(self):
        prof = profile(90.0, 30.0)
        geom = ArrayGeometry(8)
        a = draw_channel(prof, geom, np.random.default_rng(5))
        b = draw_channel(prof, geom, np.random.default_rng(5))
        assert np.array_equal(a.vector, b.vector)
        assert np.array_equal(a.aoas, b.aoas)

    def test_batch_matches_statistics(self, rng):
        prof = profile(100.0, 30.0)
        geom = ArrayGeometry(8)
        draws = draw_channel_matrix(prof, geom, 5000, rng)
        assert draws.shape == (8, 5000)
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(1.0, rel=0.05)


# ============================================================================
# ANALYTIC COVARIANCE
# ============================================================================


def quad_covariance_entry(support, spacing, lag):
    """Adaptive-quadrature oracle for one covariance lag (independent path)."""
    def integrand_re(t):
        return np.cos(2 * np.pi * spacing * lag * np.cos(t)) / support.width

    def integrand_im(t):
        return np.sin(2 * np.pi * spacing * lag * np.cos(t)) / support.width

    re, _ = scipy.integrate.quad(integrand_re, support.lower, support.upper, limit=200)
    im, _ = scipy.integrate.quad(integrand_im, support.lower, support.upper, limit=200)
    return re + 1j * im


class TestAnalyticCovariance:
    def test_full_support_is_bessel(self):
        """Uniform over [0, pi] at half-wavelength spacing gives J0 lags."""
        prof = profile(90.0, 180.0)
        cov = analytic_covariance(prof, ArrayGeometry(8)).matrix
        lags = np.arange(8)
        expected = scipy.special.j0(np.pi * lags)
        assert np.allclose(cov[0], expected, atol=1e-8)
        assert cov[0, 0] == pytest.approx(1.0)
        assert cov[0, 1].real == pytest.approx(-0.3042, abs=5e-4)

    def test_quadrature_oracle_on_lags(self):
        prof = profile(70.0, 50.0, beta=1.3)
        cov = analytic_covariance(prof, ArrayGeometry(6)).matrix
        for lag in range(6):
            expected = 1.3**2 * quad_covariance_entry(prof.support, 0.5, lag)
            assert cov[0, lag] == pytest.approx(expected, abs=1e-9)

    def test_point_mass_rank_one(self):
        prof = LinkProfile(beta=1.2, support=AngularSupport(1.0, 0.0), num_paths=50)
        geom = ArrayGeometry(5)
        cov = analytic_covariance(prof, geom).matrix
        a = steering_vector(geom, 1.0)
        assert np.allclose(cov, 1.2**2 * np.outer(a, a.conj()))
        assert np.linalg.matrix_rank(cov) == 1

    def test_structure_invariants(self):
        prof = profile(85.0, 30.0, beta=0.4)
        cov = analytic_covariance(prof, ArrayGeometry(12)).matrix
        # Hermitian, Toeplitz, trace normalization, PSD up to rounding.
        assert np.linalg.norm(cov - cov.conj().T) <= 1e-12 * np.linalg.norm(cov)
        for k in range(1, 12):
            diag = np.diagonal(cov, offset=k)
            assert np.allclose(diag, diag[0])
        assert np.trace(cov).real / 12 == pytest.approx(0.4**2, rel=1e-10)
        w = hermitian_eig(cov).eigenvalues
        assert w[-1] >= -1e-10 * w[0]

    def test_matches_empirical(self, rng):
        """Monte Carlo oracle: sample covariance of 1e5 draws within 2%."""
        prof = profile(75.0, 45.0)
        geom = ArrayGeometry(24)
        analytic = analytic_covariance(prof, geom).matrix
        draws = draw_channel_matrix(prof, geom, 100_000, rng)
        empirical = empirical_covariance(draws).matrix
        rel = np.linalg.norm(analytic - empirical) / np.linalg.norm(analytic)
        assert rel <= 0.02

    def test_quad_points_floor(self):
        with pytest.raises(InvalidInputError):
            analytic_covariance(profile(90.0, 30.0), ArrayGeometry(4), quad_points=32)


class TestEmpiricalCovariance:
    def test_single_sample_rank_one(self, rng):
        real = draw_channel(profile(90.0, 30.0), ArrayGeometry(6), rng)
        cov = empirical_covariance([real])
        assert np.allclose(cov.matrix, np.outer(real.vector, real.vector.conj()))
        assert cov.sample_count == 1

    def test_rank_one_profile_alignment(self, rng):
        """1000 draws of a zero-spread profile align with the steering vector."""
        theta = 1.1
        prof = LinkProfile(beta=1.0, support=AngularSupport(theta, 0.0), num_paths=50)
        geom = ArrayGeometry(16)
        cov = empirical_covariance(draw_channel_matrix(prof, geom, 1000, rng))
        top = hermitian_eig(cov.matrix).eigenvectors[:, 0]
        reference = steering_vector(geom, theta) / np.sqrt(16)
        assert abs(np.vdot(top, reference)) >= 0.999

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            empirical_covariance([])


# ============================================================================
# SUPPORT DECOMPOSITION
# ============================================================================


class TestDecomposeBySupport:
    def test_full_containment(self, rng):
        prof = profile(90.0, 20.0)
        geom = ArrayGeometry(8)
        real = draw_channel(prof, geom, rng)
        h_in, h_out = decompose_by_support(real, geom, AngularSupport(np.pi / 2, 1.0))
        assert np.linalg.norm(h_out) == 0.0
        assert np.allclose(h_in, real.vector)

    def test_disjoint(self, rng):
        prof = profile(40.0, 20.0)
        geom = ArrayGeometry(8)
        real = draw_channel(prof, geom, rng)
        target = AngularSupport(np.deg2rad(120.0), np.deg2rad(10.0))
        h_in, h_out = decompose_by_support(real, geom, target)
        assert np.linalg.norm(h_in) == 0.0
        assert np.allclose(h_out, real.vector)

    def test_parts_sum_to_vector(self, rng):
        prof = profile(60.0, 60.0)
        geom = ArrayGeometry(10)
        target = AngularSupport(np.deg2rad(45.0), np.deg2rad(20.0))
        for _ in range(5):
            real = draw_channel(prof, geom, rng)
            h_in, h_out = decompose_by_support(real, geom, target)
            assert np.linalg.norm(h_in + h_out - real.vector) <= 1e-12 * np.linalg.norm(real.vector)

    def test_half_overlap_energy_fraction(self, rng):
        """Half-overlapping supports put half the mean energy in-support.

        Path-counting oracle: AoAs are uniform over a 60 degree support of
        which 30 degrees overlap the target, so the expected in-support
        path fraction (hence energy fraction, phases being i.i.d.) is 0.5.
        """
        prof = profile(60.0, 60.0)
        geom = ArrayGeometry(4)
        target = AngularSupport(np.deg2rad(30.0), np.deg2rad(30.0))
        in_energy, total_energy, in_paths, total_paths = 0.0, 0.0, 0, 0
        for _ in range(10_000):
            real = draw_channel(prof, geom, rng)
            h_in, _ = decompose_by_support(real, geom, target)
            in_energy += np.vdot(h_in, h_in).real
            total_energy += np.vdot(real.vector, real.vector).real
            in_paths += int(np.sum(target.contains(real.aoas)))
            total_paths += real.aoas.size
        assert in_paths / total_paths == pytest.approx(0.5, abs=0.01)
        assert in_energy / total_energy == pytest.approx(0.5, abs=0.05)


# ============================================================================
# PROPERTY: CROSS-CHANNEL ORTHOGONALITY DECAY
# ============================================================================


def test_cross_channel_orthogonality_slope(rng):
    """Mean |h1^H h2| / M decays like M^(-1/2) for same-support draws."""
    prof = profile(90.0, 60.0)
    m_grid = np.array([16, 32, 64, 128, 256])
    means = []
    for m in m_grid:
        geom = ArrayGeometry(int(m))
        h1 = draw_channel_matrix(prof, geom, 200, rng)
        h2 = draw_channel_matrix(prof, geom, 200, rng)
        means.append(np.mean(np.abs(np.sum(h1.conj() * h2, axis=0))) / m)
    slope = np.polyfit(np.log(m_grid), np.log(means), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.15)
