"""Convergence checks: log-likelihood trace, Geweke z, and merging chains."""
import numpy as np

from hsghs import Dataset, GibbsConfig, PosteriorSamples, run_chain
from hsghs.sampler import geweke_z
from hsghs.simulate import simulate_setting

sim = simulate_setting(60, 20, 4, "ar1", seed=6)
ds = Dataset(sim.X, sim.Y)
chains = [run_chain(ds, GibbsConfig(burnin=300, nmc=1000, seed=s)) for s in (0, 1)]

for c in chains:
    post = c.loglik[c.config.burnin:]
    print(f"seed {c.config.seed}: first loglik {c.loglik[0]:.1f}, "
          f"post-burn-in mean {post.mean():.1f}, Geweke z {geweke_z(post):.2f}")

merged = PosteriorSamples.merge(chains)
print("merged draws:", merged.nmc)
gap = np.abs(chains[0].beta_draws.mean(0) - chains[1].beta_draws.mean(0)).max()
print("largest between-chain gap in posterior means of beta:", round(gap, 4))
