"""Shared data model.

Coefficient ordering
--------------------
Every flat coefficient vector in this package is ``vec(B')``, i.e. ``B`` read
row by row with the response index varying fastest::

    beta = [B11, ..., B1q, B21, ..., B2q, ..., Bp1, ..., Bpq]

so ``beta = B.ravel()`` and ``B = beta.reshape(p, q)`` (numpy C order). Element
``B[i, j]`` (0-based) lives at ``beta[i * q + j]``. The Kronecker transform in
:mod:`hsghs.sampler` relies on this ordering.

Precision draws are stored as the upper triangle (diagonal included), read row
by row: ``[w11, w12, ..., w1q, w22, ..., wqq]``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np


class DimensionMismatchError(ValueError):
    pass


class NonFiniteError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


class DegenerateResidualError(ArithmeticError):
    """A residual column has (numerically) zero sum of squares."""


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", np.atleast_2d(np.asarray(self.X, dtype=float)))
        object.__setattr__(self, "Y", np.atleast_2d(np.asarray(self.Y, dtype=float)))
        validate_dataset(self)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return self.Y.shape[1]


def validate_dataset(ds: Dataset) -> None:
    X, Y = ds.X, ds.Y
    if X.ndim != 2 or Y.ndim != 2:
        raise DimensionMismatchError("X and Y must be 2-d")
    if X.shape[0] != Y.shape[0]:
        raise DimensionMismatchError(
            f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if X.shape[0] < 1 or X.shape[1] < 1 or Y.shape[1] < 1:
        raise DimensionMismatchError(f"empty data: X {X.shape}, Y {Y.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise NonFiniteError("X and Y must contain only finite values")


@dataclass
class ChainState:
    """Current values of every quantity the Gibbs sampler updates.

    ``eta2`` and ``rho`` are full symmetric q x q arrays; only their
    off-diagonal entries are used.
    """

    beta: np.ndarray
    omega: np.ndarray
    lambda2: np.ndarray
    nu: np.ndarray
    tau2: float
    xi: float
    eta2: np.ndarray
    rho: np.ndarray
    zeta2: float
    phi: float

    @classmethod
    def initial(cls, p: int, q: int) -> "ChainState":
        # beta = 0, Omega = I; every scale starts at 1 (half-Cauchy median)
        pq = p * q
        return cls(
            beta=np.zeros(pq),
            omega=np.eye(q),
            lambda2=np.ones(pq),
            nu=np.ones(pq),
            tau2=1.0,
            xi=1.0,
            eta2=np.ones((q, q)),
            rho=np.ones((q, q)),
            zeta2=1.0,
            phi=1.0,
        )

    def copy(self) -> "ChainState":
        return dataclasses.replace(
            self,
            **{f.name: np.array(getattr(self, f.name), copy=True)
               for f in dataclasses.fields(self)
               if isinstance(getattr(self, f.name), np.ndarray)})

    def check(self, sym_tol: float = 1e-10) -> None:
        """Raise if the state violates its invariants."""
        om = self.omega
        if not np.allclose(om, om.T, rtol=0.0, atol=sym_tol):
            raise NotPositiveDefiniteError("omega is not symmetric")
        try:
            np.linalg.cholesky(om)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("omega is not positive definite") from exc
        q = om.shape[0]
        off = ~np.eye(q, dtype=bool)
        pos = [self.lambda2, self.nu, np.array([self.tau2, self.xi, self.zeta2, self.phi]),
               self.eta2[off], self.rho[off]]
        for arr in pos:
            if not (np.all(np.isfinite(arr)) and np.all(arr > 0)):
                raise NonFiniteError("shrinkage parameters must be finite and positive")


@dataclass(frozen=True)
class GibbsConfig:
    burnin: int = 1000
    nmc: int = 5000
    thin: int = 1
    seed: int = 0
    pd_jitter: float = 0.0

    def __post_init__(self):
        if self.burnin < 0:
            raise ValueError("burnin must be >= 0")
        if self.nmc < 1:
            raise ValueError("nmc must be >= 1")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.pd_jitter < 0:
            raise ValueError("pd_jitter must be >= 0")

    @property
    def total_iterations(self) -> int:
        return self.burnin + self.nmc * self.thin


@dataclass
class PosteriorSamples:
    beta_draws: np.ndarray   # (nmc, p*q)
    omega_draws: np.ndarray  # (nmc, q*(q+1)/2)
    dims: tuple[int, int, int]
    config: GibbsConfig
    loglik: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def nmc(self) -> int:
        return self.beta_draws.shape[0]

    def B_draws(self) -> np.ndarray:
        """Draws of B, shape (nmc, p, q)."""
        _, p, q = self.dims
        return self.beta_draws.reshape(-1, p, q)

    def Omega_draws(self) -> np.ndarray:
        """Draws of Omega as full symmetric matrices, shape (nmc, q, q)."""
        return expand_triangle(self.omega_draws)

    @classmethod
    def merge(cls, chains: list["PosteriorSamples"]) -> "PosteriorSamples":
        if not chains:
            raise ValueError("nothing to merge")
        dims = chains[0].dims
        if any(c.dims != dims for c in chains):
            raise DimensionMismatchError("chains have different dimensions")
        return cls(
            beta_draws=np.vstack([c.beta_draws for c in chains]),
            omega_draws=np.vstack([c.omega_draws for c in chains]),
            dims=dims,
            config=chains[0].config,
        )


@dataclass(frozen=True)
class GroundTruth:
    B0: np.ndarray
    Omega0: np.ndarray

    def __post_init__(self):
        try:
            np.linalg.cholesky(self.Omega0)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("Omega0 must be positive definite") from exc

    @property
    def b_support(self) -> np.ndarray:
        return self.B0 != 0

    @property
    def omega_support(self) -> np.ndarray:
        """Off-diagonal support of Omega0 (diagonal always False)."""
        s = self.Omega0 != 0
        np.fill_diagonal(s, False)
        return s


def triangle_size(q: int) -> int:
    return q * (q + 1) // 2


def triangle_dim(length: int) -> int:
    """Return q such that q(q+1)/2 == length, else raise."""
    q = (math.isqrt(8 * length + 1) - 1) // 2
    if q < 1 or triangle_size(q) != length:
        raise ValueError(f"length {length} is not a triangular number")
    return q


def compress_triangle(M: np.ndarray) -> np.ndarray:
    """Upper triangle (diagonal included) of the last two axes, row-major."""
    M = np.asarray(M)
    q = M.shape[-1]
    iu = np.triu_indices(q)
    return M[..., iu[0], iu[1]]


def expand_triangle(tri: np.ndarray) -> np.ndarray:
    """Inverse of :func:`compress_triangle`; works on a stack along axis 0."""
    tri = np.asarray(tri, dtype=float)
    q = triangle_dim(tri.shape[-1])
    iu = np.triu_indices(q)
    out = np.zeros(tri.shape[:-1] + (q, q))
    out[..., iu[0], iu[1]] = tri
    out[..., iu[1], iu[0]] = tri
    return out
