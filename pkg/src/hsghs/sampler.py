"""Gibbs sampler for joint horseshoe regression / graphical horseshoe precision.

One iteration (:func:`gibbs_step`) does

1. whiten the responses with the symmetric root of the current precision,
   turning the matrix-normal regression into ``y ~ N(Xt beta, I)`` with
   ``Xt = kron(X, Omega^(1/2))``;
2. draw ``beta`` from its Gaussian full conditional with the fast sampler
   that only factors an ``nq x nq`` system;
3. - 4. refresh the horseshoe local/global scales of ``beta``;
5. form the residual scatter ``S = (Y - XB)'(Y - XB)``;
6. - 7. sweep the columns of ``Omega`` with graphical horseshoe updates;
8. refresh the global scale of the precision off-diagonals.
"""
from __future__ import annotations

import logging
import time

import numpy as np
import scipy.linalg as sla

from .distributions import make_rng
from .types import (ChainState, Dataset, DegenerateResidualError, GibbsConfig,
                    NotPositiveDefiniteError, PosteriorSamples, compress_triangle)

log = logging.getLogger(__name__)

# materialize kron(X, Omega^(1/2)) when it has at most this many entries
MATERIALIZE_LIMIT = 20_000_000
# s_kk below this fraction of tr(S)/q is treated as a degenerate residual column
SKK_FLOOR = 1e-12


def _inv_gamma(shape, scale, rng):
    # hot-loop variant of distributions.inv_gamma_draw; scales are positive by construction
    return scale / rng.standard_gamma(shape, size=np.shape(scale))


def omega_sqrt(omega: np.ndarray, jitter: float = 0.0) -> np.ndarray:
    """Symmetric positive square root ``V diag(sqrt(d)) V'``."""
    omega = np.asarray(omega, dtype=float)
    if jitter:
        omega = omega + jitter * np.eye(omega.shape[0])
    d, V = np.linalg.eigh((omega + omega.T) / 2)
    if d[0] <= 0:
        raise NotPositiveDefiniteError(
            f"precision matrix has minimum eigenvalue {d[0]:.3g}")
    R = (V * np.sqrt(d)) @ V.T
    return (R + R.T) / 2


class KroneckerDesign:
    """The whitened design ``kron(X, R)`` with ``R = Omega^(1/2)``.

    Matrix-vector products never need the ``nq x pq`` matrix: with the
    ``vec(B')`` ordering, ``kron(X, R) vec(B') = vec((X B R)')``. The dense
    matrix is kept only when it is small (see ``MATERIALIZE_LIMIT``).
    """

    def __init__(self, X, omega_sqrt, materialize=None):
        self.X = np.asarray(X, dtype=float)
        self.omega_sqrt = np.asarray(omega_sqrt, dtype=float)
        n, p = self.X.shape
        q = self.omega_sqrt.shape[0]
        self.n, self.p, self.q = n, p, q
        if materialize is None:
            materialize = n * q * p * q <= MATERIALIZE_LIMIT
        self.materialized = self._kron() if materialize else None

    def _kron(self):
        n, p, q = self.n, self.p, self.q
        R = self.omega_sqrt
        return (self.X[:, None, :, None] * R[None, :, None, :]).reshape(n * q, p * q)

    @property
    def shape(self):
        return (self.n * self.q, self.p * self.q)

    def matvec(self, beta):
        if self.materialized is not None:
            return self.materialized @ beta
        B = np.reshape(beta, (self.p, self.q))
        return (self.X @ B @ self.omega_sqrt).ravel()

    def rmatvec(self, w):
        if self.materialized is not None:
            return self.materialized.T @ w
        W = np.reshape(w, (self.n, self.q))
        return (self.X.T @ W @ self.omega_sqrt).ravel()

    def dense(self):
        if self.materialized is not None:
            return self.materialized
        return self._kron()

    def weighted_gram(self, weights):
        """``Xt diag(weights) Xt'`` as an ``nq x nq`` array."""
        if self.materialized is not None:
            A = self.materialized
            return (A * weights) @ A.T
        # sum_j X_ij X_kj (R diag(L_j) R)_ab, L = weights as p x q
        n, p, q = self.n, self.p, self.q
        R = self.omega_sqrt
        L = np.reshape(weights, (p, q))
        T = np.einsum("ac,jc,cb->jab", R, L, R)
        G = self.X.T[:, :, None] * self.X.T[:, None, :]
        return np.einsum("jik,jab->iakb", G, T, optimize=True).reshape(n * q, n * q)


def transform_data(ds: Dataset, omega, jitter: float = 0.0, materialize=None):
    """Return ``(y_tilde, design)`` for the whitened regression."""
    R = omega_sqrt(omega, jitter)
    # vec(R Y') stacks the whitened rows of Y
    y_tilde = (ds.Y @ R).ravel()
    return y_tilde, KroneckerDesign(ds.X, R, materialize=materialize)


def sample_beta(y_tilde, design: KroneckerDesign, lambda_star, rng):
    """Exact draw from ``N((Xt'Xt + L^-1)^-1 Xt'y, (Xt'Xt + L^-1)^-1)``.

    ``L = diag(lambda_star)``. Only the ``nq x nq`` system
    ``(Xt L Xt' + I) w = y - v`` is factored.
    """
    lambda_star = np.asarray(lambda_star, dtype=float)
    if not (np.all(lambda_star > 0) and np.all(np.isfinite(lambda_star))):
        raise ValueError("lambda_star must be finite and strictly positive")
    nq = design.shape[0]
    u = np.sqrt(lambda_star) * rng.standard_normal(lambda_star.size)
    delta = rng.standard_normal(nq)
    v = design.matvec(u) + delta
    M = design.weighted_gram(lambda_star)
    M[np.diag_indices_from(M)] += 1.0
    try:
        w = sla.cho_solve(sla.cho_factor(M, lower=True, check_finite=True),
                          y_tilde - v, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise np.linalg.LinAlgError(
            "beta system is singular or non-finite; upstream state is corrupt") from exc
    return u + lambda_star * design.rmatvec(w)


def update_lambda_nu(state: ChainState, rng):
    """Local scales of beta and their auxiliaries; returns ``(lambda2, nu)``."""
    lambda2 = _inv_gamma(1.0, 1.0 / state.nu + state.beta**2 / (2.0 * state.tau2), rng)
    nu = _inv_gamma(1.0, 1.0 + 1.0 / lambda2, rng)
    return lambda2, nu


def update_tau_xi(state: ChainState, rng):
    """Global scale of beta and its auxiliary; returns ``(tau2, xi)``."""
    pq = state.beta.size
    scale = 1.0 / state.xi + np.sum(state.beta**2 / (2.0 * state.lambda2))
    tau2 = float(_inv_gamma((pq + 1) / 2.0, scale, rng))
    xi = float(_inv_gamma(1.0, 1.0 + 1.0 / tau2, rng))
    return tau2, xi


def ghs_sweep_omega(S, n: int, state: ChainState, rng):
    """One column-by-column graphical horseshoe pass over ``Omega``.

    Returns new ``(omega, eta2, rho)``; the inputs are not modified.
    """
    S = np.asarray(S, dtype=float)
    omega = np.array(state.omega, dtype=float, copy=True)
    eta2 = np.array(state.eta2, dtype=float, copy=True)
    rho = np.array(state.rho, dtype=float, copy=True)
    zeta2 = state.zeta2
    q = omega.shape[0]
    floor = SKK_FLOOR * np.trace(S) / q
    if not floor > 0:
        raise DegenerateResidualError("residual scatter matrix has zero trace")

    eye = np.eye(q - 1)
    for k in range(q):
        s_kk = S[k, k]
        if s_kk < floor:
            raise DegenerateResidualError(f"residual column {k} has s_kk={s_kk:.3g}")
        gam = rng.standard_gamma(n / 2.0 + 1.0) * 2.0 / s_kk
        if q == 1:
            omega[0, 0] = gam
            continue
        rest = np.r_[0:k, k + 1:q]
        om11 = omega[np.ix_(rest, rest)]
        s12 = S[rest, k]
        try:
            L11 = np.linalg.cholesky(om11)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("precision block lost definiteness") from exc
        L11_inv = sla.solve_triangular(L11, eye, lower=True, check_finite=False)
        om11_inv = L11_inv.T @ L11_inv
        C_inv = s_kk * om11_inv
        C_inv[np.diag_indices(q - 1)] += 1.0 / (eta2[rest, k] * zeta2)
        try:
            L = np.linalg.cholesky(C_inv)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("conditional precision C^-1 is not PD") from exc
        mean = -sla.cho_solve((L, True), s12, check_finite=False)
        upsilon = mean + sla.solve_triangular(L.T, rng.standard_normal(q - 1),
                                              lower=False, check_finite=False)
        omega[rest, k] = upsilon
        omega[k, rest] = upsilon
        # omega_kk - v' Omega11^-1 v = gamma > 0 keeps Omega PD
        z = L11_inv @ upsilon
        omega[k, k] = gam + z @ z

        e = _inv_gamma(1.0, 1.0 / rho[rest, k] + upsilon**2 / (2.0 * zeta2), rng)
        r = _inv_gamma(1.0, 1.0 + 1.0 / e, rng)
        eta2[rest, k] = e
        eta2[k, rest] = e
        rho[rest, k] = r
        rho[k, rest] = r
    return omega, eta2, rho


def update_zeta_phi(state: ChainState, rng):
    """Global scale of the precision off-diagonals; returns ``(zeta2, phi)``."""
    q = state.omega.shape[0]
    iu = np.triu_indices(q, k=1)
    n_edges = q * (q - 1) // 2
    scale = 1.0 / state.phi + np.sum(state.omega[iu]**2 / (2.0 * state.eta2[iu]))
    zeta2 = float(_inv_gamma((n_edges + 1) / 2.0, scale, rng))
    phi = float(_inv_gamma(1.0, 1.0 + 1.0 / zeta2, rng))
    return zeta2, phi


def log_likelihood(B, omega, ds: Dataset) -> float:
    """Gaussian log-likelihood of ``(B, Omega)`` without the ``2 pi`` constant.

    Equals ``-(n/2) * l(B, Omega)`` where
    ``l = tr(n^-1 (Y-XB)'(Y-XB) Omega) - log|Omega|`` is the usual negative
    log-likelihood up to constants, so larger is better.
    """
    omega = np.asarray(omega, dtype=float)
    sign, logdet = np.linalg.slogdet(omega)
    if sign <= 0:
        raise NotPositiveDefiniteError("omega must be positive definite")
    try:
        np.linalg.cholesky(omega)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("omega must be positive definite") from exc
    resid = ds.Y - ds.X @ np.reshape(B, (ds.p, ds.q))
    quad = np.sum((resid.T @ resid) * omega)
    return float(-0.5 * quad + 0.5 * ds.n * logdet)


def gibbs_step(ds: Dataset, state: ChainState, rng, pd_jitter: float = 0.0) -> ChainState:
    new = state.copy()
    y_tilde, design = transform_data(ds, new.omega, jitter=pd_jitter)
    new.beta = sample_beta(y_tilde, design, new.lambda2 * new.tau2, rng)
    new.lambda2, new.nu = update_lambda_nu(new, rng)
    new.tau2, new.xi = update_tau_xi(new, rng)

    resid = ds.Y - ds.X @ new.beta.reshape(ds.p, ds.q)
    S = resid.T @ resid
    new.omega, new.eta2, new.rho = ghs_sweep_omega(S, ds.n, new, rng)
    new.zeta2, new.phi = update_zeta_phi(new, rng)
    return new


def run_chain(ds: Dataset, config: GibbsConfig, rng=None, progress=None) -> PosteriorSamples:
    """Run ``burnin + nmc * thin`` iterations from ``beta = 0``, ``Omega = I``.

    Every ``thin``-th post-burn-in state is stored. The log-likelihood of every
    iteration (burn-in included) is kept in ``samples.loglik``. ``progress``, if
    given, is called as ``progress(iteration, total, state)``.
    """
    if rng is None:
        rng = make_rng(config.seed)
    p, q = ds.p, ds.q
    total = config.total_iterations
    beta_draws = np.empty((config.nmc, p * q))
    omega_draws = np.empty((config.nmc, q * (q + 1) // 2))
    loglik = np.empty(total)

    state = ChainState.initial(p, q)
    stored = 0
    report_every = max(total // 10, 1)
    t0 = time.perf_counter()
    for it in range(1, total + 1):
        state = gibbs_step(ds, state, rng, pd_jitter=config.pd_jitter)
        loglik[it - 1] = log_likelihood(state.beta, state.omega, ds)
        if it > config.burnin and (it - config.burnin) % config.thin == 0:
            beta_draws[stored] = state.beta
            omega_draws[stored] = compress_triangle(state.omega)
            stored += 1
        if progress is not None:
            progress(it, total, state)
        if it % report_every == 0:
            log.info("iteration %d/%d (%.1fs) loglik=%.3f",
                     it, total, time.perf_counter() - t0, loglik[it - 1])
    return PosteriorSamples(beta_draws=beta_draws, omega_draws=omega_draws,
                            dims=(ds.n, p, q), config=config, loglik=loglik)


def geweke_z(trace, first: float = 0.1, last: float = 0.5) -> float:
    """Geweke z-score comparing the early and late means of a trace.

    Variances of each segment mean use non-overlapping batch means with
    about ``sqrt(m)`` batches, which accounts for autocorrelation.
    """
    trace = np.asarray(trace, dtype=float)
    m = trace.size
    a = trace[: int(first * m)]
    b = trace[m - int(last * m):]
    if a.size < 4 or b.size < 4:
        raise ValueError("trace too short for a Geweke diagnostic")
    return float((a.mean() - b.mean()) / np.sqrt(_batch_mean_var(a) + _batch_mean_var(b)))


def _batch_mean_var(x):
    n_batches = max(int(np.sqrt(x.size)), 2)
    size = x.size // n_batches
    means = x[: n_batches * size].reshape(n_batches, size).mean(axis=1)
    return means.var(ddof=1) / n_batches
