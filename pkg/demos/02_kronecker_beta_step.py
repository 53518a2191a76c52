"""Whitening and the fast beta draw.

With beta = vec(B') (row-major B.ravel()) and R = Omega^(1/2), the model
Y = XB + E becomes y_tilde = kron(X, R) beta + noise with identity covariance.
The fast sampler only factors an nq x nq system, so its cost grows linearly
in p. Here we check it against a dense pq x pq draw.
"""
import numpy as np

from hsghs import Dataset
from hsghs.oracles import beta_conditional_direct, beta_conditional_moments
from hsghs.sampler import sample_beta, transform_data

rng = np.random.default_rng(2)
n, p, q = 6, 3, 2
X = rng.standard_normal((n, p))
Y = rng.standard_normal((n, q))
omega = np.array([[1.0, 0.4], [0.4, 1.5]])
y_t, design = transform_data(Dataset(X, Y), omega)

# the operator never needs the dense matrix
B = rng.standard_normal((p, q))
dense = np.kron(X, design.omega_sqrt)
print("matvec matches kron:", np.allclose(design.matvec(B.ravel()), dense @ B.ravel()))

lam = np.full(p * q, 0.8)
fast = np.array([sample_beta(y_t, design, lam, rng) for _ in range(20_000)])
slow = beta_conditional_direct(y_t, design, lam, rng, size=20_000)
mu, cov = beta_conditional_moments(y_t, design, lam)
print("analytic mean  ", np.round(mu, 3))
print("fast draws mean", np.round(fast.mean(0), 3))
print("dense draws mean", np.round(slow.mean(0), 3))
print("max covariance gap (fast):", np.abs(np.cov(fast.T) - cov).max())
