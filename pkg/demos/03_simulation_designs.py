"""Simulation designs: structured precisions, sparse coefficients, Toeplitz X."""
import numpy as np

from hsghs.simulate import (coef_matrix, design_toeplitz, precision_ar1,
                            precision_cliques, precision_star, simulate_setting)

np.set_printoptions(precision=2, suppress=True)
print("AR1, q=5\n", precision_ar1(5))
print("cliques, q=6\n", precision_cliques(6))
omega, ok = precision_star(5)
print("star, q=5 (positive definite: %s)\n" % ok, omega)
# the star pattern with 0.25 edges stops being PD once q - 1 > 16
print("star q=25 positive definite:", precision_star(25)[1])

rng = np.random.default_rng(3)
B, mask = coef_matrix(40, 5, 0.05, rng)
print("nonzero coefficients:", mask.sum(), "of", mask.size)
print("magnitudes in [0.5, 2]:", np.all((np.abs(B[mask]) >= 0.5) & (np.abs(B[mask]) <= 2)))

X = design_toeplitz(20_000, 4, rng, rho=0.7)
print("empirical corr(X) first row:", np.corrcoef(X.T)[0], "expected 0.7^|i-j|")

sim = simulate_setting(100, 50, 10, "cliques", seed=0)
print("notes:", sim.notes)
