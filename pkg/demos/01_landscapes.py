# %% [markdown]
# # Building rho-MNK landscapes
#
# A landscape has four knobs: string length `n`, epistatic links per bit `k`,
# number of objectives `m` and the correlation `rho` between objectives.
# Instances are fully determined by their seed.

# %%
import numpy as np

from rhomnk import InstanceParams, evaluate, evaluate_many, generate

inst = generate(InstanceParams(n=64, m=2, k=4, rho=0.9, seed=7))
print("links of bit 0:", inst.links[0])
print("table of bit 0, first rows:\n", inst.tables[0, :4])

# %% [markdown]
# Evaluating a solution averages, per objective, the table entries picked out
# by each bit and its links.

# %%
rng = np.random.default_rng(0)
x = rng.integers(0, 2, size=64)
print("f(x) =", evaluate(inst, x))

# %% [markdown]
# The correlation between objectives follows `rho`. A quick check over
# random solutions:

# %%
for rho in (-0.9, 0.0, 0.9):
    inst = generate(InstanceParams(n=64, m=2, k=4, rho=rho, seed=1))
    f = evaluate_many(inst, rng.integers(0, 2, size=(10_000, 64)))
    print(f"rho={rho:+.1f}  empirical correlation={np.corrcoef(f.T)[0, 1]:+.3f}")

# %% [markdown]
# With `m > 2` not every negative correlation is possible: `rho` must stay
# above `-1/(m-1)`.

# %%
from rhomnk import InfeasibleCorrelation

try:
    generate(InstanceParams(n=16, m=3, k=2, rho=-0.7, seed=0))
except InfeasibleCorrelation as exc:
    print("rejected:", exc)
