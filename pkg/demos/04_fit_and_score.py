"""Fit one simulated data set and score the estimates.

Selection uses the middle 75% posterior credible interval: an element is
selected when its interval excludes zero.
"""
import numpy as np

from hsghs import (Dataset, GibbsConfig, GroundTruth, credible_interval, posterior_mean,
                   run_chain, select_by_interval)
from hsghs.metrics import avg_kl, metrics_report
from hsghs.simulate import simulate_setting

sim = simulate_setting(60, 20, 4, "ar1", seed=4)
samples = run_chain(Dataset(sim.X, sim.Y), GibbsConfig(burnin=300, nmc=1000, seed=4))
print("stored draws:", samples.beta_draws.shape, samples.omega_draws.shape)

B_hat, O_hat = posterior_mean(samples)
sel = select_by_interval(credible_interval(samples, level=0.75))
truth = GroundTruth(sim.B0, sim.Omega0)
report = metrics_report(truth, B_hat, O_hat, sim.X, sim.X_test, sim.Y_test,
                        sel.b_selected, sel.omega_selected)
print(report.to_json())

null = avg_kl(truth, np.zeros_like(B_hat), np.eye(4), sim.X)
print("avg KL of the fit %.3f vs the null estimate %.3f" % (report.avg_kl, null))
print("Omega_hat\n", np.round(O_hat, 2))
print("Omega_true\n", sim.Omega0)
