# %% [markdown]
# # Experiments and the acceptance suite

# %%
from cevlab.models import ExpAR1, GaussianSquareExp
from cevlab.verify import ExperimentConfig, run_experiment, run_suite, summary_table

rep = run_experiment(ExperimentConfig("conditional-cdf", ExpAR1(2, 0.5), 1, 2_000_000, 0.999, 0.05, 42))
print(rep.verdict, rep.distances)

# %% [markdown]
# The negative control reports the spread of the rescaled lag alongside the
# two slope estimates.

# %%
neg = run_experiment(ExperimentConfig("negative-control", GaussianSquareExp(0.25, 0.5), 1, 2_000_000, None, 0.1, 42, {
    "low_levels": [0.95, 0.97, 0.98, 0.99], "high_levels": [0.998, 0.999, 0.9993, 0.9995],
}))
print(neg.estimates, neg.diagnostics["log_iqr_low_high"], neg.diagnostics["finding"])

# %% [markdown]
# Fast criteria only; `cevlab verify --suite paper` runs everything.

# %%
print(summary_table(run_suite(42, only={7, 8, 9})))
