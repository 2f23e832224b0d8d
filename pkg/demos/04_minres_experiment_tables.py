"""Robust-preconditioner experiment tables for the Stokes tracking problem.

For each mesh size the table reports: the measured positive spectral
interval of the preconditioned system (Ritz/harmonic-Ritz estimation with a
generic probe), the parameter-independent theoretical interval, the
observed MINRES iteration count for the model right-hand side at
eps = 1e-8, and the theoretical iteration bound.

Pass --full to include levels 3 and 4 (a few extra seconds).
"""

import sys

from saddlebounds.cli import ExperimentConfig, format_table, run_table

levels = [0, 1, 2, 3, 4] if "--full" in sys.argv else [0, 1, 2]
config = ExperimentConfig(flavor="stokes", levels=levels, nu=[1.0], omega=[1.0])
rows = run_table(config)
print(format_table(rows, "markdown"))

print("sweep over the frequency at a fixed mesh:")
config = ExperimentConfig(
    flavor="stokes", levels=[2], nu=[1.0], omega=[0.0, 1.0, 100.0]
)
print(format_table(run_table(config), "markdown"))
