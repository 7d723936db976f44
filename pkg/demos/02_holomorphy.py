# %% [markdown]
# # Holomorphy of f(z) = (e^{nz})_n
#
# The curve z -> (e^{z}, e^{2z}, e^{3z}, ...) is checked coordinate-wise:
# derivatives, difference quotients, triangle integrals and the Cauchy
# integral formula. A conjugate coordinate acts as a negative control.

# %%
import numpy as np

from lcsprobe.holomorphy import (
    Triangle,
    cauchy_formula_check,
    conj_family,
    derivative_exact,
    escape_demo,
    exp_family,
    rate_check,
    triangle_check,
    weak_analyticity_check,
)

f = exp_family()

# %% [markdown]
# The j-th derivative at z has coordinates n^j e^{nz}.

# %%
print(derivative_exact(f, 2, 0.1, 5).coords)

# %% [markdown]
# Central difference quotients converge at second order: halving h divides the
# error by about four.

# %%
rep = rate_check(f, 2, 0.1 + 0.2j, h=1e-3, N=10)
print(rep.verdict.value, np.round(rep.measurements["ratios"], 4))

# %% [markdown]
# Derivatives escape every finite sample: after k derivatives we need a
# generator that the sample of order k does not contain.

# %%
for k in range(3):
    rep = escape_demo(k, 0.2)
    print(k, rep.measurements["member_statuses"], rep.measurements["escape_status"])

# %% [markdown]
# Triangle integrals vanish and the Cauchy formula reproduces point values.

# %%
print(triangle_check(f, Triangle((0, 0.3, 0.3j)), N=10).verdict.value)
print(cauchy_formula_check(f, 0, 0.5, 0.1j, 256, 10).verdict.value)
print(weak_analyticity_check(f, range(1, 11)).verdict.value)

# %% [markdown]
# The conjugate map is not holomorphic and is caught by the same check.

# %%
print(cauchy_formula_check(conj_family(), 0, 0.5, 0.1, 256, 1).verdict.value)
bad = f.with_coordinate(3, lambda z: complex(z).conjugate(), "conj at 3")
print(weak_analyticity_check(bad, range(1, 11)).measurements["failing_coordinates"])
