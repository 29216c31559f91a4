"""Monte Carlo experiment driver.

Runs a (scenario x estimator x antenna-count) sweep with per-trial random
streams derived from (master_seed, M, trial index), so results do not
depend on execution order or worker count. Every estimator inside one
trial consumes the exact same received blocks; metric differences are
attributable to the estimator alone.
"""

import concurrent.futures
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channel import analytic_covariance, draw_channel_matrix, empirical_covariance
from .estimators import CovarianceSet, ESTIMATOR_TAGS, estimate
from .exceptions import ConfigurationError
from .metrics import (
    check_theorem1,
    check_theorem2,
    check_theorem3,
    compute_alpha,
    normalized_error,
    percell_rate_mrc,
    to_db,
)
from .signals import (
    draw_block_channels,
    generate_pilots,
    simulate_data,
    simulate_training,
)
from .topology import build_scenario, preset

OUTPUT_DIR_ENV = "PILOTDECON_OUTPUT_DIR"
DEFAULT_COVARIANCE_SAMPLES = 1000

CSV_HEADER = (
    "scenario,estimator,M,K,L,C,trials,mean_err_db,median_err_db,std_err_db,"
    "mean_rate,theorem1_frac,theorem2_frac,theorem3_frac"
)

# Stream-derivation tags keeping trial and covariance draws disjoint.
_TRIAL_STREAM = 1
_COVARIANCE_STREAM = 2

# Inline scenario keys accepted in a config file, mapped to build_scenario.
_SCENARIO_KEYS = (
    "name", "num_cells", "users_per_cell", "spread_deg", "gamma", "cell_radius",
    "alpha", "num_paths", "pilot_length", "data_length", "spacing_ratio",
    "snr_edge_db", "exclusion_radius", "placement_seed",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment."""

    scenario: object            # preset name or inline mapping
    m_grid: tuple
    estimators: tuple
    trials: int
    master_seed: int
    covariance_mode: str = "analytic"
    output_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        grid = tuple(int(m) for m in self.m_grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError("M_grid must be non-empty and ascending")
        object.__setattr__(self, "m_grid", grid)
        object.__setattr__(self, "estimators", tuple(self.estimators))
        for tag in self.estimators:
            if tag not in ESTIMATOR_TAGS:
                raise ConfigurationError(
                    f"unknown estimator {tag!r}; available: {', '.join(ESTIMATOR_TAGS)}"
                )
        parse_covariance_mode(self.covariance_mode)


@dataclass(frozen=True)
class ResultRow:
    """One aggregated line of the output CSV."""

    scenario: str
    estimator: str
    m: int
    users_per_cell: int
    num_cells: int
    data_length: int
    trials: int
    mean_err_db: float
    median_err_db: float
    std_err_db: float
    mean_rate: float
    theorem1_frac: float
    theorem2_frac: float
    theorem3_frac: float


def parse_covariance_mode(mode):
    """'analytic', 'empirical', or 'empirical(N)' -> (kind, sample count)."""
    text = str(mode).strip()
    if text == "analytic":
        return "analytic", 0
    if text == "empirical":
        return "empirical", DEFAULT_COVARIANCE_SAMPLES
    if text.startswith("empirical(") and text.endswith(")"):
        try:
            count = int(text[len("empirical("):-1])
        except ValueError as exc:
            raise ConfigurationError(f"bad covariance_mode {mode!r}") from exc
        if count < 1:
            raise ConfigurationError("empirical covariance needs >= 1 sample")
        return "empirical", count
    raise ConfigurationError(
        f"covariance_mode must be 'analytic' or 'empirical(N)', got {mode!r}"
    )


def resolve_scenario(spec):
    """Preset name or inline mapping -> Scenario."""
    if isinstance(spec, str):
        return preset(spec)
    if isinstance(spec, dict):
        unknown = set(spec) - set(_SCENARIO_KEYS)
        if unknown:
            raise ConfigurationError(
                f"unknown scenario keys: {', '.join(sorted(unknown))}"
            )
        missing = {"num_cells", "users_per_cell", "spread_deg", "gamma"} - set(spec)
        if missing:
            raise ConfigurationError(
                f"inline scenario is missing keys: {', '.join(sorted(missing))}"
            )
        kwargs = dict(spec)
        spread = np.deg2rad(float(kwargs.pop("spread_deg")))
        name = kwargs.pop("name", "inline")
        num_cells = int(kwargs.pop("num_cells"))
        users = int(kwargs.pop("users_per_cell"))
        gamma = float(kwargs.pop("gamma"))
        if "placement_seed" not in kwargs:
            kwargs["placement_seed"] = 0
        return build_scenario(name, num_cells, users, spread, gamma, **kwargs)
    raise ConfigurationError("scenario must be a preset name or a mapping")


def trial_rng(master_seed, num_antennas, trial):
    """Independent per-trial stream; identical under any execution order."""
    return np.random.default_rng(
        np.random.SeedSequence([master_seed, num_antennas, _TRIAL_STREAM, trial])
    )


def build_covariance_sets(scenario, covariance_mode, master_seed):
    """Per-base-station covariance sets, analytic or sample-estimated."""
    kind, samples = parse_covariance_mode(covariance_mode)
    m = scenario.geometry.num_antennas
    sets = {}
    for j in range(scenario.num_cells):
        covs = {}
        for l in range(scenario.num_cells):
            for k in range(scenario.users_per_cell):
                profile = scenario.profiles[(l, k, j)]
                if kind == "analytic":
                    covs[(l, k)] = analytic_covariance(profile, scenario.geometry).matrix
                else:
                    rng = np.random.default_rng(
                        np.random.SeedSequence(
                            [master_seed, m, _COVARIANCE_STREAM, j, l, k]
                        )
                    )
                    draws = draw_channel_matrix(profile, scenario.geometry, samples, rng)
                    covs[(l, k)] = empirical_covariance(draws).matrix
        sets[j] = CovarianceSet(
            covariances=covs,
            noise_variance=scenario.noise_variance,
            target_cell=j,
        )
    return sets


def validate_compatibility(scenario, estimators):
    """Reject estimator/scenario mismatches before any trial runs."""
    if "sa" in estimators and scenario.users_per_cell > 1:
        raise ConfigurationError(
            "the subspace-amplitude estimator supports one user per cell only"
        )


@dataclass
class _TrialOutcome:
    errors: dict        # estimator -> linear normalized error
    rates: dict         # estimator -> per-cell rate
    theorem2_frac: float
    theorem3_frac: float


def run_trial(scenario, pilots, covariance_sets, estimators, rng):
    """One coherence block: shared observations, every estimator, metrics."""
    channels = draw_block_channels(scenario, rng)
    training = simulate_training(scenario, channels, pilots, rng)
    data = simulate_data(scenario, channels, rng)
    truths = {
        (j, k): channels[(j, k, j)]
        for j in range(scenario.num_cells)
        for k in range(scenario.users_per_cell)
    }
    errors, rates = {}, {}
    for tag in estimators:
        estimates = {}
        for j in range(scenario.num_cells):
            result = estimate(tag, training[j], data[j], pilots, covariance_sets[j])
            for k, vec in result.vectors.items():
                estimates[(j, k)] = vec
        errors[tag] = normalized_error(estimates, truths)
        rates[tag] = percell_rate_mrc(
            estimates, channels, scenario.noise_variance,
            scenario.num_cells, scenario.users_per_cell,
        )
    t2_hits, t3_hits, pairs = 0, 0, 0
    for j in range(scenario.num_cells):
        for k in range(scenario.users_per_cell):
            interferers = {
                l: channels[(l, k, j)]
                for l in range(scenario.num_cells) if l != j
            }
            if not interferers:
                t2_hits += 1
                t3_hits += 1
                pairs += 1
                continue
            support = scenario.profiles[(j, k, j)].support
            xi, _ = covariance_sets[j].filters(k)
            t2_hits += bool(check_theorem2(
                truths[(j, k)], interferers, xi, scenario.geometry, support
            ))
            t3_hits += bool(check_theorem3(
                truths[(j, k)], interferers, scenario.geometry, support
            ))
            pairs += 1
    return _TrialOutcome(
        errors=errors,
        rates=rates,
        theorem2_frac=t2_hits / pairs,
        theorem3_frac=t3_hits / pairs,
    )


def _theorem1_fraction(scenario, covariance_sets):
    hits, pairs = 0, 0
    for j in range(scenario.num_cells):
        for k in range(scenario.users_per_cell):
            alpha = compute_alpha(covariance_sets[j], k)
            hits += bool(check_theorem1(alpha, j))
            pairs += 1
    return hits / pairs


def run_experiment(config, workers=1):
    """Execute the full sweep; returns rows ordered by (M, estimator)."""
    base = resolve_scenario(config.scenario)
    validate_compatibility(base, config.estimators)
    rows = []
    for m in config.m_grid:
        scenario = base.with_antennas(m)
        covariance_sets = build_covariance_sets(
            scenario, config.covariance_mode, config.master_seed
        )
        pilots = generate_pilots(scenario.users_per_cell, scenario.pilot_length)

        def one(trial):
            rng = trial_rng(config.master_seed, m, trial)
            return run_trial(scenario, pilots, covariance_sets, config.estimators, rng)

        if workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(one, range(config.trials)))
        else:
            outcomes = [one(t) for t in range(config.trials)]

        theorem1_frac = _theorem1_fraction(scenario, covariance_sets)
        theorem2_frac = float(np.mean([o.theorem2_frac for o in outcomes]))
        theorem3_frac = float(np.mean([o.theorem3_frac for o in outcomes]))
        for tag in config.estimators:
            errs = np.array([o.errors[tag] for o in outcomes])
            errs_db = np.array([to_db(e) for e in errs])
            rows.append(ResultRow(
                scenario=scenario.name,
                estimator=tag,
                m=m,
                users_per_cell=scenario.users_per_cell,
                num_cells=scenario.num_cells,
                data_length=scenario.data_length,
                trials=config.trials,
                mean_err_db=to_db(float(np.mean(errs))),
                median_err_db=to_db(float(np.median(errs))),
                std_err_db=float(np.std(errs_db)),
                mean_rate=float(np.mean([o.rates[tag] for o in outcomes])),
                theorem1_frac=theorem1_frac,
                theorem2_frac=theorem2_frac,
                theorem3_frac=theorem3_frac,
            ))
    return rows


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def format_rows(rows, master_seed):
    """CSV body: metadata comment, header, fixed-point values, LF endings."""
    lines = [f"# master_seed={master_seed} version={__version__}", CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.scenario,
            r.estimator,
            str(r.m),
            str(r.users_per_cell),
            str(r.num_cells),
            str(r.data_length),
            str(r.trials),
            f"{r.mean_err_db:.6f}",
            f"{r.median_err_db:.6f}",
            f"{r.std_err_db:.6f}",
            f"{r.mean_rate:.6f}",
            f"{r.theorem1_frac:.6f}",
            f"{r.theorem2_frac:.6f}",
            f"{r.theorem3_frac:.6f}",
        ]))
    return "\n".join(lines) + "\n"


def default_output_path(scenario_name):
    directory = os.environ.get(OUTPUT_DIR_ENV, ".")
    return os.path.join(directory, f"{scenario_name}_results.csv")


def resolve_output_path(config):
    if config.output_path:
        path = config.output_path
        if not os.path.isabs(path) and OUTPUT_DIR_ENV in os.environ:
            path = os.path.join(os.environ[OUTPUT_DIR_ENV], path)
        return path
    name = config.scenario if isinstance(config.scenario, str) else "experiment"
    return default_output_path(name)


def write_csv(rows, path, master_seed):
    text = format_rows(rows, master_seed)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    return path


def run_and_write(config, workers=1):
    """Run the experiment and write its CSV; returns (rows, path)."""
    rows = run_experiment(config, workers=workers)
    path = resolve_output_path(config)
    write_csv(rows, path, config.master_seed)
    return rows, path
