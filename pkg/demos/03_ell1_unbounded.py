# %% [markdown]
# # An unbounded functional on l^1
#
# g(x) = sum_k x_k^k is finite on every summable sequence, but no ball is
# mapped to a bounded set. For each x and N we build a nearby y with
# |g(y)| >= N, deciding every inequality in exact arithmetic.

# %%
import numpy as np

from lcsprobe.ell1 import (
    SummableVector,
    g_eval,
    g_exact,
    local_unboundedness_demo,
    unboundedness_witness,
)

# %%
x = SummableVector({1: 0.5, 2: -0.25j, 5: 0.75})
print("g(x) ~", g_eval(x, 1e-12).value, " exact:", g_exact(x))

# %% [markdown]
# A witness changes one coordinate far out in the tail.

# %%
for N in (10, 1e3, 1e6):
    w = unboundedness_witness(x, N)
    print(N, "m =", w.m, "|g(y)| =", abs(w.g_of_y), "dist =", w.norm1_distance, w.ok)

# %% [markdown]
# Shrinking the perturbation by 1/n keeps y inside any ball around x.

# %%
for radius in (2, 0.5, 0.01):
    d = local_unboundedness_demo(x, radius, 1e6)
    print(radius, "n =", d.n, d.ok)

# %% [markdown]
# Random points in the ball around 0 of radius 1/4 stay bounded once the tail is controlled.

# %%
rng = np.random.default_rng(0)
values = [abs(g_eval(SummableVector(rng.uniform(-0.1, 0.1, 8))).value) for _ in range(200)]
print("max |g| over samples:", max(values))
