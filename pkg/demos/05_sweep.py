# %% [markdown]
# # Parameter sweeps
#
# `run_sweep` repeats a walk over a grid of landscape parameters and writes a
# long-format CSV plus a per-cell summary. The same thing is available as
# `rhomnk sweep --desk-scale ...` on the command line.

# %%
import csv
import tempfile
from pathlib import Path

from rhomnk import SweepConfig, run_sweep

out = Path(tempfile.mkdtemp()) / "adaptive.csv"
config = SweepConfig(
    n_values=(64,), m_values=(2, 3), k_values=(2, 6), rho_values=(-0.7, 0.0, 0.9),
    mu=10, walk_kind="adaptive", replicates=3, output_path=str(out),
)
result = run_sweep(config)
print("skipped (infeasible):", result.skipped)

# %%
with open(out.with_name("adaptive_summary.csv")) as fh:
    for row in csv.DictReader(fh):
        if row["metric"] == "steps_taken":
            print(row["m"], row["k"], row["rho"], "mean length", round(float(row["mean"]), 1))
