"""Simulation designs: structured precisions, sparse coefficients, Toeplitz designs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PrecisionStructure:
    kind: str  # "ar1" | "cliques" | "star"
    q: int
    value: float | None = None
    group_size: int = 3
    strict: bool = False

    def build(self) -> np.ndarray:
        kind = self.kind.lower()
        if kind == "ar1":
            return precision_ar1(self.q, 0.45 if self.value is None else self.value)
        if kind == "cliques":
            return precision_cliques(self.q, self.group_size,
                                     0.75 if self.value is None else self.value,
                                     strict=self.strict)
        if kind == "star":
            return precision_star(self.q, 0.25 if self.value is None else self.value)[0]
        raise ValueError(f"unknown precision structure {self.kind!r}")


def precision_ar1(q: int, value: float = 0.45) -> np.ndarray:
    """Unit diagonal, ``value`` on the first off-diagonals, zero elsewhere."""
    if q < 1:
        raise ValueError("q must be >= 1")
    off = np.full(q - 1, value)
    return np.eye(q) + np.diag(off, 1) + np.diag(off, -1)


def precision_cliques(q: int, group_size: int = 3, value: float = 0.75,
                      strict: bool = False) -> np.ndarray:
    """Block diagonal cliques of ``group_size`` with off-diagonal ``value``.

    When ``q`` is not a multiple of ``group_size`` the trailing
    ``q % group_size`` rows stay isolated (unit diagonal only), unless
    ``strict`` is set, in which case a ``ValueError`` is raised.
    """
    if q < 1 or group_size < 1:
        raise ValueError("q and group_size must be >= 1")
    leftover = q % group_size
    if leftover and strict:
        raise ValueError(f"q={q} is not divisible by group_size={group_size}")
    omega = np.eye(q)
    for start in range(0, q - leftover, group_size):
        block = slice(start, start + group_size)
        omega[block, block] = value
    np.fill_diagonal(omega, 1.0)
    return omega


def precision_star(q: int, value: float = 0.25):
    """Hub on the first response: returns ``(omega, is_pd)``.

    Eigenvalues are ``1 +- value * sqrt(q - 1)`` (and 1), so large hubs are not
    positive definite; the matrix is returned regardless and flagged.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    omega = np.eye(q)
    omega[0, 1:] = value
    omega[1:, 0] = value
    is_pd = bool(value**2 * (q - 1) < 1)
    return omega, is_pd


def coef_matrix(p: int, q: int, sparsity: float, rng, dist: str = "uniform"):
    """Sparse ``p x q`` coefficients and their support mask.

    Exactly ``round(sparsity * p * q)`` positions, chosen uniformly without
    replacement, are nonzero. ``dist="uniform"`` draws magnitudes uniformly on
    ``(-2, -0.5) U (0.5, 2)``; ``dist="const5"`` sets them all to 5.
    """
    if not 0 < sparsity <= 1:
        raise ValueError("sparsity must be in (0, 1]")
    k = int(round(sparsity * p * q))
    idx = rng.choice(p * q, size=k, replace=False)
    if dist == "uniform":
        vals = rng.uniform(0.5, 2.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    elif dist in ("const5", "constant"):
        vals = np.full(k, 5.0)
    else:
        raise ValueError(f"unknown coefficient distribution {dist!r}")
    B = np.zeros(p * q)
    B[idx] = vals
    B = B.reshape(p, q)
    return B, B != 0


def design_toeplitz(n: int, p: int, rng, rho: float = 0.7) -> np.ndarray:
    """Rows i.i.d. ``N(0, T)`` with ``T[i, j] = rho**|i - j|``."""
    if not abs(rho) < 1:
        raise ValueError("|rho| must be < 1")
    idx = np.arange(p)
    T = rho ** np.abs(idx[:, None] - idx[None, :])
    L = np.linalg.cholesky(T)
    return rng.standard_normal((n, p)) @ L.T


def gen_response(X, B, omega, rng) -> np.ndarray:
    """``Y = XB + E`` with rows of ``E`` i.i.d. ``N(0, omega^-1)``."""
    X = np.asarray(X, dtype=float)
    B = np.asarray(B, dtype=float)
    if X.shape[1] != B.shape[0] or B.shape[1] != omega.shape[0]:
        raise ValueError("inconsistent dimensions")
    n, q = X.shape[0], omega.shape[0]
    # omega = L L'  =>  L'^-1 z ~ N(0, omega^-1)
    L = np.linalg.cholesky(omega)
    Z = rng.standard_normal((n, q))
    E = np.linalg.solve(L.T, Z.T).T
    return X @ B + E


@dataclass
class SimulatedData:
    X: np.ndarray
    Y: np.ndarray
    B0: np.ndarray
    Omega0: np.ndarray
    X_test: np.ndarray
    Y_test: np.ndarray
    b_support: np.ndarray
    notes: list


def simulate_setting(n: int, p: int, q: int, structure: str = "ar1",
                     coef: str = "uniform", sparsity: float = 0.05,
                     rng=None, seed=None, rho: float = 0.7) -> SimulatedData:
    """One replicate: fresh design, training and same-size test responses.

    Replicate ``r`` of a study seeded with ``s`` should use ``seed=s + r``.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    notes = []
    kind = structure.lower()
    if kind == "star":
        omega, is_pd = precision_star(q)
        if not is_pd:
            raise ValueError(f"star precision with q={q} is not positive definite")
    else:
        if kind == "cliques" and q % 3:
            notes.append(f"cliques: q={q} not divisible by 3; last {q % 3} "
                         "row(s) left isolated")
        omega = PrecisionStructure(kind, q).build()
    B0, support = coef_matrix(p, q, sparsity, rng, dist=coef)
    X = design_toeplitz(n, p, rng, rho)
    Y = gen_response(X, B0, omega, rng)
    X_test = design_toeplitz(n, p, rng, rho)
    Y_test = gen_response(X_test, B0, omega, rng)
    return SimulatedData(X, Y, B0, omega, X_test, Y_test, support, notes)
