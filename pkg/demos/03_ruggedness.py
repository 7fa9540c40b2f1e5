# %% [markdown]
# # Ruggedness from random walks
#
# A random walk over solution-sets replaces one member by a Hamming-1
# neighbour at each step. The autocorrelation of the hypervolume along the
# walk, and its correlation length `tau = -1/ln r(1)`, summarise ruggedness.

# %%
import numpy as np

from rhomnk import InstanceParams, autocorrelation, generate, random_walk

# %% [markdown]
# First the single-objective case (`mu = 1`, `m = 1`), which is a plain NK
# landscape. The ensemble value for n=64, k=2 is `-1/ln(1 - 3/64)`, about 20.8;
# per-instance estimates land a little lower (see the README).

# %%
taus = []
for seed in range(10):
    inst = generate(InstanceParams(n=64, m=1, k=2, rho=0.0, seed=seed))
    walk = random_walk(inst, mu=1, length=5000, rng=seed)
    taus.append(autocorrelation(walk.fitness_series, 100).tau)
print("mean tau:", np.mean(taus))

# %% [markdown]
# Now sets of 100 solutions under two objectives. The walk is much smoother
# and smoothness falls as `k` grows.

# %%
for k in (2, 6, 10):
    inst = generate(InstanceParams(n=64, m=2, k=k, rho=-0.2, seed=k))
    walk = random_walk(inst, mu=100, length=5000, rng=1)
    ac = autocorrelation(walk.fitness_series, 100)
    print(f"k={k:2d}  r(1)={ac.r[0]:.5f}  tau={ac.tau:.0f}")
