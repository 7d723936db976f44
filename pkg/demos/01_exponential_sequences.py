# %% [markdown]
# # Sequences of the form n^k z^n
#
# Each generator h(n) = n^k z^n is a formal sequence. We truncate a few of
# them, certify their linear independence exactly, and watch a derivative
# fall out of the span of a finite sample.

# %%
from fractions import Fraction

import numpy as np

from lcsprobe._gauss import GaussianRational
from lcsprobe.sequences import (
    GeneratorSpec,
    SpanningFamily,
    h_sequence,
    independence_rank,
    span_membership,
    truncate,
)

# %%
h = h_sequence(GeneratorSpec(2, 0.5 + 0.5j))
print(truncate(h, 6).coords)

# %% [markdown]
# Log-space evaluation keeps huge terms representable even when the value
# itself overflows a float.

# %%
big = h_sequence(GeneratorSpec(3, 10.0))
print("log|h(400)|, phase =", big.log(400))

# %% [markdown]
# ## Exact rank
# The generators below have Gaussian-rational bases, so the truncated matrix
# can be reduced exactly.

# %%
zs = [GaussianRational(Fraction(1, 2)), GaussianRational(0, 1), GaussianRational(2, -1)]
family = SpanningFamily([GeneratorSpec(k, z) for z in zs for k in range(2)], label="demo")
cert = independence_rank(family, len(family.generators), mode="exact")
print("rank", cert.rank, "of", len(family.generators))

# %% [markdown]
# ## Membership
# A generator belongs to a family that contains it; a higher power of n does not.

# %%
for target in (GeneratorSpec(1, 2 - 1j), GeneratorSpec(3, 2 - 1j)):
    result = span_membership(target, family)
    print(target, result.status.value, np.round(result.residuals, 6))
