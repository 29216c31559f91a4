"""Walkthrough: the Monte Carlo harness end to end.

Builds an experiment config programmatically, runs a small sweep, and
writes the CSV. The same experiment is available from the command line:

    pilotdecon preset --name fig1 --override trials=40 M_grid=10,25,50 \
        estimators=ls,mmse,ca output_path=fig1_small.csv

Run with: python3 demos/monte_carlo_experiment.py
"""

from pilotdecon.harness import ExperimentConfig, run_experiment, write_csv

config = ExperimentConfig(
    scenario="fig1",
    m_grid=(10, 25, 50),
    estimators=("ls", "mmse", "ca"),
    trials=40,
    master_seed=2016,
)

rows = run_experiment(config, workers=4)

print(f"{'estimator':>9s} {'M':>4s} {'median err dB':>14s} {'rate b/s/Hz':>12s} "
      f"{'thm1':>5s} {'thm2':>5s}")
for row in rows:
    print(f"{row.estimator:>9s} {row.m:4d} {row.median_err_db:14.2f} "
          f"{row.mean_rate:12.2f} {row.theorem1_frac:5.2f} {row.theorem2_frac:5.2f}")

path = write_csv(rows, "fig1_small.csv", config.master_seed)
print(f"\nwrote {path}; render it with the plotter package:")
print("  decon-plot --input fig1_small.csv --metric err_db --out fig1_small.svg")
