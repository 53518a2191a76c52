"""ROC curves: credible-interval width for the sampler, thresholds for point estimates."""
import numpy as np

from hsghs import Dataset, GibbsConfig, GroundTruth, posterior_mean, run_chain
from hsghs.simulate import simulate_setting
from hsghs.summary import roc_sweep_bayes, roc_sweep_threshold

sim = simulate_setting(60, 30, 4, "ar1", seed=5)
samples = run_chain(Dataset(sim.X, sim.Y), GibbsConfig(burnin=300, nmc=1000, seed=5))
truth = GroundTruth(sim.B0, sim.Omega0)

levels = np.round(np.arange(1, 100) / 100, 2)
bayes = roc_sweep_bayes(samples, truth.b_support, "B", levels)
print("level  fpr    tpr")
for level, (fpr, tpr) in zip(levels[::10], bayes[::10]):
    print(f"{level:5.2f}  {fpr:.3f}  {tpr:.3f}")

# thresholding |B_hat| gives a second curve from the same fit
B_hat, _ = posterior_mean(samples)
pts = roc_sweep_threshold(B_hat, truth.b_support, target="B")
print("threshold ROC points:", len(pts), "first", pts[0], "last", pts[-1])
