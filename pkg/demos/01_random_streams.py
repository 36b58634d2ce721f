# %% [markdown]
# # Addressable random streams
# Every uniform is a pure function of (seed, stream, slot, replicate), so any
# window of a simulation can be regenerated without replaying what came before.

# %%
import numpy as np

from cevlab.randomness import CenteredLogParetoLaw, RandomStream, innovation_log_mgf, stationary_log_moment

s = RandomStream(42)
full = s.uniforms(slot=3, start=0, count=10)
window = s.uniforms(slot=3, start=6, count=4)
print(np.array_equal(full[6:], window))

# %% [markdown]
# The innovation `eps = E/alpha - 1/alpha` has an exact Pareto tail for `exp(eps)`.

# %%
law = CenteredLogParetoLaw(2.0)
w = law.exp_from_uniform(s.uniforms(0, 0, 10**6))
for x in (2.0, 4.0, 8.0):
    print(x, np.mean(w > x), float(law.exp_sf(x)))

# %% [markdown]
# Breiman constants are products of innovation moments.

# %%
print(innovation_log_mgf(2.0, 1.0))  # 2 e^{-1/2}
print(stationary_log_moment(2.0, lambda j: 0.5**j, 1.0, 40))  # E[V_0] for phi = 0.5
