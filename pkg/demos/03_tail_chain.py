# %% [markdown]
# # Tail chains
# Conditioned on a large start, the exponential AR(1) behaves like
# `Y_t = Y_{t-1}**phi * W_t` after rescaling by `x**(phi**t)`.

# %%
import numpy as np
from scipy import stats

from cevlab.estimate import conditional_sample
from cevlab.models import ExpAR1, SwitchingExpAR1, simulate_top
from cevlab.randomness import RandomStream
from cevlab.tailchain import simulate_tail_chain, tail_chain_for

spec = ExpAR1(2, 0.5)
block = simulate_top(spec, 2, 4_000_000, RandomStream(1), keep=4001)
cond = conditional_sample(block, q=0.999, b=[0.5, 0.25])
chain = simulate_tail_chain(tail_chain_for(spec), 2, 200_000, RandomStream(2))
for t in (1, 2):
    print(t, stats.ks_2samp(cond.column(t), chain.column(t)).statistic)

# %% [markdown]
# With regime switching the chain is absorbed at zero after a geometric time.

# %%
sw = simulate_tail_chain(tail_chain_for(SwitchingExpAR1(2, 0.5, 0.3)), 3, 500_000, RandomStream(3))
print([float(np.mean(sw.column(k) == 0)) for k in (1, 2, 3)], [1 - 0.7**k for k in (1, 2, 3)])
