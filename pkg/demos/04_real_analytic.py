# %% [markdown]
# # Real-analytic sequence-valued maps
#
# Two curves: t -> (1/(1+n^2 t^2))_n, whose coordinate radii shrink like 1/n,
# and t -> (sin(n t))_n, whose Taylor series converge everywhere but whose
# extension to complex t grows faster than any power of n.

# %%
import math

from lcsprobe.realanalytic import (
    complexification_failure_demo,
    growth_exponent_probe,
    oracle_degree,
    product_radius_demo,
    runge_taylor,
    taylor_partial_sum_check,
    taylor_radius_estimate,
)
from lcsprobe.sequences import FormalSequence

# %%
for n in (1, 5, 20):
    print(n, taylor_radius_estimate(runge_taylor(n, 40)).radius)
rep = product_radius_demo(50)
print("infimum of radii:", rep.measurements["infimum"])

# %% [markdown]
# Taylor partial sums of sin(n t) around t0 match sin(n t) once the degree is
# chosen from the remainder bound.

# %%
print("degree for n = 10, |t - t0| = 3:", oracle_degree(30, 1e-10))
print(taylor_partial_sum_check(-1.0, 2.0, range(1, 11)).verdict.value)
print(taylor_partial_sum_check(0.0, 3.0, range(1, 11), K=80).verdict.value)

# %% [markdown]
# On the imaginary axis sin(i n t) = i sinh(n t) and the growth is exponential.

# %%
rep = complexification_failure_demo(0.1)
print(rep.measurements["threshold_index"], rep.measurements["exponent_or_flag"])
square = FormalSequence(lambda n: float(n) ** 2, "n^2", lambda n: (2 * math.log(n), 0.0))
print(growth_exponent_probe(square, 5).exponent_or_flag)
