# %% [markdown]
# # Hypervolume as a fitness over sets
#
# With maximised objectives in [0, 1) and the reference point at the origin,
# the hypervolume of a set is the area (volume) its points dominate.

# %%
import numpy as np

from rhomnk import hypervolume, hypervolume_mc, nondominated_filter

pts = np.array([(1.0, 0.5), (0.5, 1.0), (0.4, 0.4)])
print("front:", nondominated_filter(pts).tolist())
print("hypervolume:", hypervolume(pts))  # 0.75; the dominated point adds nothing

# %% [markdown]
# The exact value can be cross-checked by Monte-Carlo sampling.

# %%
rng = np.random.default_rng(3)
pts = rng.random((8, 3))
est, se = hypervolume_mc(pts, np.zeros(3), 1_000_000, rng)
print(f"exact={hypervolume(pts):.5f}  monte-carlo={est:.5f} +/- {se:.5f}")

# %% [markdown]
# Degrading any point never increases the indicator.

# %%
worse = pts * rng.random(pts.shape)
print(hypervolume(pts) >= hypervolume(worse))
