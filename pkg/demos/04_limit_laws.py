# %% [markdown]
# # Limit laws, moments and constants

# %%
import math

from cevlab.limits import (
    cond_moment_limit, expar1_limit, explin_limit, homogeneity_residual, limit_for, product_tail_constant,
)
from cevlab.models import ExpAR1, SVHeavyInnov, SVLeverage

lag1 = expar1_limit(2.0, 0.5, 1)  # quadrature
print([round(lag1.query([math.inf, y]), 5) for y in (0.5, 1.0, 2.0)])
print(explin_limit(2.0, {"rule": "geometric", "phi": 0.5}, 1).query([math.inf, 1.0]))

# %% [markdown]
# Lag two and the other families use a fixed-seed sample of the polar factors `J`.

# %%
lag2 = expar1_limit(2.0, 0.5, 2)
print(lag2.query([3.0, 1.5, 1.2]), lag2.describe()["accuracy"])
print(homogeneity_residual(lag2, 2.0, [1.0, 1.0, 1.0]))
print(limit_for(SVLeverage(), 2).query([math.inf, 1.0, 1.0]))

# %%
print(cond_moment_limit(ExpAR1(2, 0.5), 1), cond_moment_limit(SVHeavyInnov(), 2))
print(product_tail_constant(ExpAR1(2, 0.5), 1).value, 3 * math.exp(-2 / 3))
