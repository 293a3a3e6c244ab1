# %% [markdown]
# # Levy-flight mutation
#
# Mantegna's algorithm draws symmetric heavy-tailed steps as u / |v|^(1/beta).
# Small beta gives mostly tiny moves with rare very long jumps.

# %%
import numpy as np

from levymoead.operators import LevyParams, levy_mutation, mantegna_sample, mantegna_sigma

for beta in (0.3, 1.0, 1.5):
    print(beta, mantegna_sigma(beta))

# %%
rng = np.random.default_rng(1)
for beta in (0.3, 1.5):
    s = mantegna_sample(beta, rng, size=1_000_000)
    print(beta, "median |step|", np.median(np.abs(s)), "P(|step| > 100)", np.mean(np.abs(s) > 100))

# %%
# the mutation scales the step by alpha0 and the parents' difference
xi = np.full(5, 0.2)
xj = np.array([0.5, 0.2, 0.1, 0.1, 0.1])
params = LevyParams(alpha0=1e-5, beta=0.3)
steps = np.array([np.linalg.norm(levy_mutation(xi, xj, params, rng) - xi) for _ in range(10_000)])
print("quantiles of ||y - xi||:", np.quantile(steps, [0.5, 0.9, 0.99, 0.999]))
