"""Uplink training and data signal synthesis.

Pilot books are rows of the unitary DFT matrix (unit-modulus symbols,
exactly orthogonal rows), reused identically in every cell so that
inter-cell pilot contamination is present by construction. Training and
data observations share one block of channel realizations; noise draws are
separated from the deterministic composition so a trial can be re-composed
with a subset of cells (e.g. an interference-free baseline) on identical
noise.
"""

from dataclasses import dataclass

import numpy as np

from .channel import draw_channel
from .exceptions import ConfigurationError


@dataclass(frozen=True)
class PilotBook:
    """K pilot sequences of length tau as rows; S S^H = tau I_K exactly."""

    matrix: np.ndarray  # (K, tau)

    @property
    def num_users(self):
        return self.matrix.shape[0]

    @property
    def length(self):
        return self.matrix.shape[1]

    def sequence(self, user):
        return self.matrix[user]


@dataclass(frozen=True)
class Observation:
    """Per-base-station received blocks plus the channels that produced them."""

    training: dict  # base station j -> (M, tau)
    data: dict      # base station j -> (M, C)
    channels: dict  # (l, k, j) -> ChannelRealization


def generate_pilots(num_users, pilot_length):
    """First K rows of the pilot_length-point DFT matrix (unit-modulus)."""
    if pilot_length < num_users:
        raise ConfigurationError(
            f"pilot_length {pilot_length} < num_users {num_users}"
        )
    k = np.arange(num_users)[:, None]
    t = np.arange(pilot_length)[None, :]
    return PilotBook(matrix=np.exp(-2j * np.pi * k * t / pilot_length))


def complex_gaussian(rng, shape, variance=1.0):
    """Circularly symmetric complex Gaussian entries of given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_block_channels(scenario, rng):
    """Draw every (cell l, user k, base station j) channel of one block."""
    channels = {}
    for l in range(scenario.num_cells):
        for k in range(scenario.users_per_cell):
            for j in range(scenario.num_cells):
                channels[(l, k, j)] = draw_channel(
                    scenario.profiles[(l, k, j)], scenario.geometry, rng
                )
    return channels


def cell_channel_matrix(channels, cell, base_station, scenario):
    """H_l^(j): channels of cell ``cell`` toward ``base_station``, as columns."""
    cols = [
        channels[(cell, k, base_station)].vector
        for k in range(scenario.users_per_cell)
    ]
    return np.stack(cols, axis=1)


def compose_training(scenario, channels, pilots, noise, cells=None):
    """Y^(j) = sum_l H_l^(j) S + N^(j) per base station, noise supplied.

    ``cells`` restricts the transmitting cells (all by default), which is
    how interference-free baselines are built on identical noise.
    """
    active = range(scenario.num_cells) if cells is None else cells
    out = {}
    for j in range(scenario.num_cells):
        y = noise[j].copy()
        for l in active:
            y += cell_channel_matrix(channels, l, j, scenario) @ pilots.matrix
        out[j] = y
    return out


def compose_data(scenario, channels, symbols, noise, cells=None):
    """W^(j) = sum_l H_l^(j) X_l + Z^(j) per base station, noise supplied."""
    active = range(scenario.num_cells) if cells is None else cells
    out = {}
    for j in range(scenario.num_cells):
        w = noise[j].copy()
        for l in active:
            w += cell_channel_matrix(channels, l, j, scenario) @ symbols[l]
        out[j] = w
    return out


def draw_training_noise(scenario, rng):
    shape = (scenario.geometry.num_antennas, scenario.pilot_length)
    return {
        j: complex_gaussian(rng, shape, scenario.noise_variance)
        for j in range(scenario.num_cells)
    }


def draw_data_noise(scenario, rng):
    shape = (scenario.geometry.num_antennas, scenario.data_length)
    return {
        j: complex_gaussian(rng, shape, scenario.noise_variance)
        for j in range(scenario.num_cells)
    }


def draw_data_symbols(scenario, rng):
    """Unit-variance symbol matrix X_l per cell, shared by all receivers."""
    shape = (scenario.users_per_cell, scenario.data_length)
    return {l: complex_gaussian(rng, shape) for l in range(scenario.num_cells)}


def simulate_training(scenario, channels, pilots, rng, cells=None):
    """Draw training noise and compose the received pilot blocks."""
    return compose_training(
        scenario, channels, pilots, draw_training_noise(scenario, rng), cells
    )


def simulate_data(scenario, channels, rng, cells=None):
    """Draw data symbols and noise and compose the received data blocks."""
    symbols = draw_data_symbols(scenario, rng)
    return compose_data(
        scenario, channels, symbols, draw_data_noise(scenario, rng), cells
    )


def simulate_block(scenario, pilots, rng):
    """One coherence block: channels, then training, then data."""
    channels = draw_block_channels(scenario, rng)
    training = simulate_training(scenario, channels, pilots, rng)
    data = simulate_data(scenario, channels, rng)
    return Observation(training=training, data=data, channels=channels)
