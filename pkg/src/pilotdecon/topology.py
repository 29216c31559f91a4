"""Multi-cell network construction: hexagonal layout, user placement,
per-link statistical profiles, noise calibration, and named presets.

Cells are the Voronoi regions of a triangular lattice of base stations, so
adjacent base stations sit sqrt(3) * cell_radius apart and each hexagonal
cell has circumradius cell_radius. All arrays are oriented along the global
x axis; angles of arrival are bearings folded into [0, pi].
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .channel import AngularSupport, ArrayGeometry, LinkProfile, path_loss
from .exceptions import ConfigurationError

# Simulation constants shared by every preset.
PRESET_CELL_RADIUS = 1000.0
PRESET_PILOT_LENGTH = 10
PRESET_DATA_LENGTH = 500
PRESET_NUM_PATHS = 50
PRESET_SPACING_RATIO = 0.5
PRESET_EXCLUSION_RADIUS = 100.0
PRESET_SNR_EDGE_DB = 0.0
PRESET_ALPHA = 1.0
DEFAULT_NUM_ANTENNAS = 100

# Fixed placement streams make the random-placement presets reproducible.
_PLACEMENT_SEEDS = {"fig2_3": 20160211, "fig4_5": 20160212}

_HEX_NEIGHBOR_ANGLES = np.deg2rad(60.0 * np.arange(6))


@dataclass(frozen=True)
class CellLayout:
    """Base-station coordinates of a hexagonal multi-cell network."""

    num_cells: int
    cell_radius: float
    positions: np.ndarray  # (L, 2), target cell at the origin


@dataclass(frozen=True)
class Scenario:
    """Immutable description of one multi-cell experiment."""

    name: str
    layout: CellLayout
    users_per_cell: int
    geometry: ArrayGeometry
    profiles: dict          # (cell l, user k, base station j) -> LinkProfile
    noise_variance: float
    pilot_length: int
    data_length: int
    user_positions: np.ndarray  # (L, K, 2)

    def __post_init__(self):
        if self.pilot_length < self.users_per_cell:
            raise ConfigurationError(
                f"pilot_length {self.pilot_length} < users_per_cell "
                f"{self.users_per_cell}: orthogonal intra-cell pilots need tau >= K"
            )
        if self.noise_variance <= 0.0:
            raise ConfigurationError("noise_variance must be positive")

    @property
    def num_cells(self):
        return self.layout.num_cells

    def with_antennas(self, num_antennas):
        """Same scenario with a different array size (profiles unchanged)."""
        geom = ArrayGeometry(num_antennas, self.geometry.spacing_ratio)
        return dataclasses.replace(self, geometry=geom)

    def with_data_length(self, data_length):
        return dataclasses.replace(self, data_length=data_length)


# ---------------------------------------------------------------------------
# Layout and placement
# ---------------------------------------------------------------------------

def build_hex_layout(num_cells, cell_radius):
    """Hexagonal layouts: 1 cell, 2 adjacent cells, or center plus first ring."""
    if cell_radius <= 0.0:
        raise ConfigurationError("cell_radius must be positive")
    spacing = math.sqrt(3.0) * cell_radius
    if num_cells == 1:
        pos = np.zeros((1, 2))
    elif num_cells == 2:
        pos = np.array([[0.0, 0.0], [spacing, 0.0]])
    elif num_cells == 7:
        ring = spacing * np.stack(
            [np.cos(_HEX_NEIGHBOR_ANGLES), np.sin(_HEX_NEIGHBOR_ANGLES)], axis=1
        )
        pos = np.vstack([np.zeros((1, 2)), ring])
    else:
        raise ConfigurationError(
            f"unsupported cell count {num_cells}; presets cover 1, 2 and 7"
        )
    return CellLayout(num_cells=num_cells, cell_radius=cell_radius, positions=pos)


def in_hexagon(point, center, cell_radius, tol=1e-9):
    """Whether a point lies in the hexagonal cell around ``center``.

    The cell is the Voronoi region of the triangular BS lattice: projections
    onto the six neighbor directions must not exceed the inradius.
    """
    rel = np.asarray(point, dtype=float) - np.asarray(center, dtype=float)
    inradius = math.sqrt(3.0) * cell_radius / 2.0
    proj = rel[0] * np.cos(_HEX_NEIGHBOR_ANGLES) + rel[1] * np.sin(_HEX_NEIGHBOR_ANGLES)
    return bool(np.all(proj <= inradius + tol))


def place_users(layout, users_per_cell, exclusion_radius, rng):
    """Uniform placement over each hexagon minus the central exclusion disc.

    Rejection sampling over the bounding square; returns an (L, K, 2) array.
    """
    if exclusion_radius >= layout.cell_radius:
        raise ConfigurationError("exclusion_radius must be below cell_radius")
    radius = layout.cell_radius
    out = np.empty((layout.num_cells, users_per_cell, 2))
    for cell in range(layout.num_cells):
        center = layout.positions[cell]
        for user in range(users_per_cell):
            while True:
                offset = rng.uniform(-radius, radius, size=2)
                dist = math.hypot(offset[0], offset[1])
                if dist < exclusion_radius:
                    continue
                if in_hexagon(center + offset, center, radius):
                    out[cell, user] = center + offset
                    break
    return out


def bearing(base_station, point):
    """LoS angle from a base station to a point, folded into [0, pi]."""
    delta = np.asarray(point, dtype=float) - np.asarray(base_station, dtype=float)
    return abs(math.atan2(delta[1], delta[0]))


def derive_profiles(layout, positions, spread, num_paths, gamma, alpha):
    """LinkProfile for every (cell l, user k, base station j) triple.

    The angular support is centered at the LoS bearing from base station j
    to the user with total width ``spread``; beta follows the path-loss law
    for the geometric distance.
    """
    num_cells, users_per_cell = positions.shape[:2]
    half = spread / 2.0
    profiles = {}
    for l in range(num_cells):
        for k in range(users_per_cell):
            pos = positions[l, k]
            for j in range(num_cells):
                bs = layout.positions[j]
                dist = float(np.linalg.norm(pos - bs))
                profiles[(l, k, j)] = LinkProfile(
                    beta=path_loss(alpha, gamma, dist),
                    support=AngularSupport(center=bearing(bs, pos), half_spread=half),
                    num_paths=num_paths,
                )
    return profiles


def calibrate_noise(layout, gamma, alpha, snr_edge_db):
    """Noise variance giving the requested per-antenna SNR at the cell edge."""
    beta_edge = path_loss(alpha, gamma, layout.cell_radius)
    return beta_edge**2 / 10.0 ** (snr_edge_db / 10.0)


# ---------------------------------------------------------------------------
# Scenario builders and presets
# ---------------------------------------------------------------------------

def build_scenario(
    name,
    num_cells,
    users_per_cell,
    spread,
    gamma,
    *,
    cell_radius=PRESET_CELL_RADIUS,
    alpha=PRESET_ALPHA,
    num_paths=PRESET_NUM_PATHS,
    pilot_length=PRESET_PILOT_LENGTH,
    data_length=PRESET_DATA_LENGTH,
    spacing_ratio=PRESET_SPACING_RATIO,
    snr_edge_db=PRESET_SNR_EDGE_DB,
    exclusion_radius=PRESET_EXCLUSION_RADIUS,
    num_antennas=DEFAULT_NUM_ANTENNAS,
    placement_seed=None,
    user_positions=None,
):
    """Assemble a Scenario from first principles.

    Positions are either supplied explicitly (an (L, K, 2) array) or drawn
    from the placement distribution seeded by ``placement_seed``.
    """
    layout = build_hex_layout(num_cells, cell_radius)
    if user_positions is None:
        if placement_seed is None:
            raise ConfigurationError(
                "either user_positions or placement_seed must be given"
            )
        rng = np.random.default_rng(placement_seed)
        user_positions = place_users(layout, users_per_cell, exclusion_radius, rng)
    else:
        user_positions = np.asarray(user_positions, dtype=float)
        if user_positions.shape != (num_cells, users_per_cell, 2):
            raise ConfigurationError(
                f"user_positions must have shape ({num_cells}, {users_per_cell}, 2)"
            )
    profiles = derive_profiles(layout, user_positions, spread, num_paths, gamma, alpha)
    return Scenario(
        name=name,
        layout=layout,
        users_per_cell=users_per_cell,
        geometry=ArrayGeometry(num_antennas, spacing_ratio),
        profiles=profiles,
        noise_variance=calibrate_noise(layout, gamma, alpha, snr_edge_db),
        pilot_length=pilot_length,
        data_length=data_length,
        user_positions=user_positions,
    )


def symmetric_two_cell_positions(cell_radius=PRESET_CELL_RADIUS):
    """Mirror-symmetric user pair realizing half-overlapping supports.

    Each user sits at its own cell's edge midpoint toward the 60 degree
    direction, which puts the two LoS bearings at the target base station
    exactly 30 degrees apart (60 and 30 degrees); with a 60 degree spread
    the two supports then overlap over half their width, and the mirrored
    construction repeats the picture at the other base station.
    """
    spacing = math.sqrt(3.0) * cell_radius
    r = spacing / 2.0
    first = np.array([r * math.cos(math.pi / 3.0), r * math.sin(math.pi / 3.0)])
    second = np.array([spacing - first[0], first[1]])
    return np.array([[first], [second]])


def preset(name, num_antennas=DEFAULT_NUM_ANTENNAS):
    """Named scenarios mirroring the simulation setups of the figures."""
    if name == "fig1":
        return build_scenario(
            "fig1",
            num_cells=2,
            users_per_cell=1,
            spread=np.deg2rad(60.0),
            gamma=0.0,
            user_positions=symmetric_two_cell_positions(),
            num_antennas=num_antennas,
        )
    if name == "fig2_3":
        return build_scenario(
            "fig2_3",
            num_cells=7,
            users_per_cell=1,
            spread=np.deg2rad(30.0),
            gamma=2.0,
            placement_seed=_PLACEMENT_SEEDS["fig2_3"],
            num_antennas=num_antennas,
        )
    if name == "fig4_5":
        return build_scenario(
            "fig4_5",
            num_cells=7,
            users_per_cell=4,
            spread=np.deg2rad(30.0),
            gamma=2.0,
            placement_seed=_PLACEMENT_SEEDS["fig4_5"],
            num_antennas=num_antennas,
        )
    raise ConfigurationError(
        f"unknown preset {name!r}; available: {', '.join(preset_names())}"
    )


def preset_names():
    return ("fig1", "fig2_3", "fig4_5")
