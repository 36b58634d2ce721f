# %% [markdown]
# # Estimators on simulated paths

# %%
from cevlab.estimate import conditional_sample, cte_plus_hat, cte_semiparametric, hill, kappa_hat, m_hat
from cevlab.limits import cond_moment_limit
from cevlab.models import ExpAR1, simulate_block, simulate_top
from cevlab.randomness import RandomStream

spec = ExpAR1(2, 0.5)
rows = simulate_block(spec, 1, 2_000_000, RandomStream(5)).rows
print("tail index of X_0 X_1:", hill(rows[:, 0] * rows[:, 1], 2000), "theory", 4 / 3)

# %%
block = simulate_top(spec, 2, 4_000_000, RandomStream(6), keep=40_001)
levels = [0.99, 0.995, 0.999, 0.9995]
print([round(kappa_hat(block, h, levels).estimate, 3) for h in (1, 2)], "theory", [0.5, 0.25])

# %% [markdown]
# Semiparametric CTE: fit `kappa_hat` and `m_hat` lower down, extrapolate higher up.

# %%
kh = kappa_hat(block, 1, levels).estimate
mh = m_hat(conditional_sample(block, 0.999, b=[kh, kh]), 1)
x = float(block.rows[399, 0])  # 99.99% quantile of the full sample
print(cte_semiparametric(x, kh, mh), cte_plus_hat(block, 1, x, min_exceedances=100))
print("m_1 limit", cond_moment_limit(spec, 1), "m_hat", mh)
