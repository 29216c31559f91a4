"""Multi-cell massive MIMO channel estimation toolkit.

Implements a family of uplink channel estimators that suppress pilot
contamination by discriminating interference in the angle domain (spatial
covariance filtering), the power domain (dominant-eigenspace projection of
the received data), or both, together with the channel/topology models and
the Monte Carlo harness needed to compare them.
"""

__version__ = "0.1.0"

from .channel import (
    AngularSupport,
    ArrayGeometry,
    ChannelRealization,
    CovarianceMatrix,
    LinkProfile,
    analytic_covariance,
    decompose_by_support,
    draw_channel,
    draw_channel_matrix,
    draw_gaussian_channel,
    empirical_covariance,
    path_loss,
    steering_matrix,
    steering_vector,
)
from .estimators import (
    CovarianceSet,
    EstimateSet,
    amplitude_estimate,
    ca_estimate,
    ca_estimate_multi,
    ca_estimate_single,
    estimate,
    ls_estimate,
    ma_estimate,
    mmse_estimate,
    sa_estimate,
    select_signal_basis,
    spatial_filters,
)
from .exceptions import (
    ConfigurationError,
    DegenerateInputError,
    DimensionError,
    InvalidInputError,
    PilotDeconError,
    SingularMatrixError,
)
from .harness import ExperimentConfig, ResultRow, run_and_write, run_experiment
from .linalg import (
    HermitianEig,
    hermitian_eig,
    pseudo_inverse,
    solve_hpd,
    spectral_norm,
)
from .metrics import (
    check_theorem1,
    check_theorem2,
    check_theorem3,
    compute_alpha,
    normalized_error,
    percell_rate_mrc,
    spectral_growth_diagnostic,
    to_db,
)
from .signals import (
    Observation,
    PilotBook,
    generate_pilots,
    simulate_block,
    simulate_data,
    simulate_training,
)
from .topology import (
    CellLayout,
    Scenario,
    build_hex_layout,
    build_scenario,
    calibrate_noise,
    derive_profiles,
    place_users,
    preset,
    preset_names,
)
