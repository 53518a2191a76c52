"""Slow, dense reference implementations used to check the fast paths.

Nothing here imports from :mod:`hsghs.sampler` or :mod:`hsghs.metrics`.
"""
import numpy as np
import scipy.linalg as sla
from scipy.stats import invgamma

from .types import GroundTruth

BETA_MAX_DIM = 200
KL_MAX_DIM = 500


class SizeGuardError(ValueError):
    pass


def _dense(design):
    return design.dense() if hasattr(design, "dense") else np.asarray(design, dtype=float)


def beta_conditional_moments(y_tilde, design, lambda_star):
    """Mean and covariance of ``N((Xt'Xt + L^-1)^-1 Xt'y, (Xt'Xt + L^-1)^-1)``."""
    A = _dense(design)
    lambda_star = np.asarray(lambda_star, dtype=float)
    if A.shape[1] > BETA_MAX_DIM:
        raise SizeGuardError(f"pq={A.shape[1]} exceeds {BETA_MAX_DIM}")
    P = A.T @ A + np.diag(1.0 / lambda_star)
    cov = np.linalg.inv(P)
    cov = (cov + cov.T) / 2
    return cov @ (A.T @ y_tilde), cov


def beta_conditional_direct(y_tilde, design, lambda_star, rng, size=None):
    """Draw(s) of beta from its conditional via a dense pq x pq Cholesky."""
    A = _dense(design)
    lambda_star = np.asarray(lambda_star, dtype=float)
    if A.shape[1] > BETA_MAX_DIM:
        raise SizeGuardError(f"pq={A.shape[1]} exceeds {BETA_MAX_DIM}")
    P = A.T @ A + np.diag(1.0 / lambda_star)
    U = sla.cholesky(P, lower=False)  # P = U'U
    mean = sla.cho_solve((U, False), A.T @ y_tilde)
    m = 1 if size is None else size
    z = rng.standard_normal((A.shape[1], m))
    draws = mean[:, None] + sla.solve_triangular(U, z, lower=False)
    return draws[:, 0] if size is None else draws.T


def kl_naive(truth: GroundTruth, B_hat, Omega_hat, X) -> float:
    """Total (not averaged) divergence built from explicit Kronecker products."""
    X = np.asarray(X, dtype=float)
    Omega_hat = np.asarray(Omega_hat, dtype=float)
    n = X.shape[0]
    q = Omega_hat.shape[0]
    if n * q > KL_MAX_DIM:
        raise SizeGuardError(f"nq={n * q} exceeds {KL_MAX_DIM}")
    Sigma0 = np.linalg.inv(truth.Omega0)
    term1 = n / 2 * (np.log(np.linalg.det(np.linalg.inv(Omega_hat) @ truth.Omega0))
                     + np.trace(Omega_hat @ Sigma0) - q)
    # column-stacking vec
    d = (X @ B_hat - X @ truth.B0).flatten(order="F")
    term2 = 0.5 * d @ np.kron(Omega_hat, np.eye(n)) @ d
    return float(term1 + term2)


def min_eigenvalue(M, tol: float = 1e-8) -> float:
    M = np.asarray(M, dtype=float)
    if not np.allclose(M, M.T, rtol=0, atol=tol):
        raise ValueError("matrix is not symmetric")
    return float(np.linalg.eigvalsh(M)[0])


def ghs_sweep_dense(S, n, omega, eta2, rho, zeta2, rng):
    """Graphical horseshoe column sweep written against permuted full matrices.

    For each column the matrices are permuted so that column ``k`` is last,
    the conditional covariance is formed with an explicit inverse, and every
    draw goes through scipy.stats / ``multivariate_normal``.
    """
    S = np.asarray(S, dtype=float)
    omega = np.array(omega, dtype=float)
    eta2 = np.array(eta2, dtype=float)
    rho = np.array(rho, dtype=float)
    q = omega.shape[0]
    for k in range(q):
        perm = [i for i in range(q) if i != k] + [k]
        Op = omega[np.ix_(perm, perm)]
        Sp = S[np.ix_(perm, perm)]
        s22 = Sp[-1, -1]
        gam = rng.gamma(n / 2 + 1, 2 / s22)
        if q == 1:
            omega[0, 0] = gam
            continue
        inv11 = np.linalg.inv(Op[:-1, :-1])
        lam = eta2[np.ix_(perm, perm)][:-1, -1]
        C = np.linalg.inv(s22 * inv11 + np.diag(1 / (lam * zeta2)))
        C = (C + C.T) / 2
        ups = rng.multivariate_normal(-C @ Sp[:-1, -1], C)
        rest = perm[:-1]
        omega[rest, k] = ups
        omega[k, rest] = ups
        omega[k, k] = gam + ups @ inv11 @ ups
        e = invgamma.rvs(1, scale=1 / rho[rest, k] + ups**2 / (2 * zeta2), random_state=rng)
        r = invgamma.rvs(1, scale=1 + 1 / np.atleast_1d(e), random_state=rng)
        eta2[rest, k] = eta2[k, rest] = e
        rho[rest, k] = rho[k, rest] = r
    return omega, eta2, rho
