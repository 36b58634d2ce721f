# %% [markdown]
# # Simulating the model families
# All seven families share one interface; the marginal tail index is checked
# with the Hill estimator.

# %%
from cevlab.estimate import hill
from cevlab.models import (
    ExpAR1, ExpLinear, GaussianSquareExp, SVHeavyInnov, SVHeavyVol, SVLeverage, SwitchingExpAR1,
    simulate_block, simulate_top, theoretical_alpha, theoretical_kappa,
)
from cevlab.randomness import RandomStream

stream = RandomStream(7)
specs = [ExpAR1(), SwitchingExpAR1(), ExpLinear(rule="long_memory", truncation=200), SVHeavyVol(), SVHeavyInnov(), SVLeverage(), GaussianSquareExp()]
for spec in specs:
    x0 = simulate_block(spec, 1, 200_000, stream).rows[:, 0]
    print(f"{spec.kind:16s} alpha={theoretical_alpha(spec):.2f} hill={hill(x0, 1000):.2f} kappa_1={theoretical_kappa(spec, 1)}")

# %% [markdown]
# `simulate_top` streams a large simulation and keeps only the rows with the
# largest `X_0`, which is all the conditional experiments need.

# %%
top = simulate_top(ExpAR1(2, 0.5), 3, 2_000_000, stream, keep=2000)
print(top.rows[:3], top.n_total)
