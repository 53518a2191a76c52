"""Estimation, prediction, divergence and support-recovery scores.

MSEs are per-element means. The precision MSE covers the full symmetric
matrix, diagonal included. Support metrics for a precision matrix are taken
over its strictly upper triangle.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .types import DimensionMismatchError, GroundTruth, NotPositiveDefiniteError


@dataclass
class MetricsReport:
    mse_b: float
    mse_omega: float
    prediction_mse: float
    avg_kl: float
    b_sen: float
    b_spe: float
    b_prc: float | None
    omega_sen: float
    omega_spe: float
    omega_prc: float | None

    def to_json(self) -> str:
        # undefined rates serialize as null
        d = {k: (None if v is None or (isinstance(v, float) and math.isnan(v)) else v)
             for k, v in asdict(self).items()}
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "MetricsReport":
        d = json.loads(text)
        names = {f.name for f in fields(cls)}
        if set(d) != names:
            raise ValueError(f"unexpected fields: {sorted(set(d) ^ names)}")
        return cls(**d)


def mse_elements(est, truth) -> float:
    est = np.asarray(est, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if est.shape != truth.shape:
        raise DimensionMismatchError(f"shapes differ: {est.shape} vs {truth.shape}")
    return float(np.mean((est - truth) ** 2))


def prediction_mse(B_hat, X_test, Y_test) -> float:
    X_test = np.asarray(X_test, dtype=float)
    Y_test = np.asarray(Y_test, dtype=float)
    B_hat = np.asarray(B_hat, dtype=float)
    if X_test.shape[1] != B_hat.shape[0] or Y_test.shape != (X_test.shape[0], B_hat.shape[1]):
        raise DimensionMismatchError("X_test, B_hat and Y_test are inconsistent")
    return float(np.mean((Y_test - X_test @ B_hat) ** 2))


def kl_terms(truth: GroundTruth, B_hat, Omega_hat, X):
    """The covariance and mean parts of ``D(p_true || p_hat)`` (not averaged).

    Covariance part: ``n/2 (log|Omega_hat^-1 Omega0| + tr(Omega_hat Omega0^-1) - q)``.
    Mean part: ``1/2 tr(Omega_hat D'D)`` with ``D = X (B_hat - B0)``, which
    equals ``1/2 vec(D)' kron(Omega_hat, I_n) vec(D)``.
    """
    Omega_hat = np.asarray(Omega_hat, dtype=float)
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    q = Omega_hat.shape[0]
    try:
        L_hat = np.linalg.cholesky(Omega_hat)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("Omega_hat must be positive definite") from exc
    L0 = np.linalg.cholesky(truth.Omega0)
    # log|Omega_hat^-1 Omega0| = log|Omega0| - log|Omega_hat|
    logdet = 2 * (np.sum(np.log(np.diag(L0))) - np.sum(np.log(np.diag(L_hat))))
    # tr(Omega_hat Omega0^-1) = ||L0^-1 L_hat||_F^2
    M = np.linalg.solve(L0, L_hat)
    cov_term = n / 2 * (logdet + np.sum(M * M) - q)
    D = X @ (np.asarray(B_hat, dtype=float) - truth.B0)
    mean_term = 0.5 * np.sum((D.T @ D) * Omega_hat)
    return float(cov_term), float(mean_term)


def avg_kl(truth: GroundTruth, B_hat, Omega_hat, X) -> float:
    """Average (per-observation) Kullback-Leibler divergence of the fit from the truth."""
    cov_term, mean_term = kl_terms(truth, B_hat, Omega_hat, X)
    return (cov_term + mean_term) / np.asarray(X).shape[0]


def confusion(selected, truth_mask, target: str = "B"):
    """``(sensitivity, specificity, precision)``; undefined ratios are ``None``.

    With ``target="Omega"`` both masks are read on the strictly upper triangle.
    """
    selected = np.asarray(selected, dtype=bool)
    truth_mask = np.asarray(truth_mask, dtype=bool)
    if selected.shape != truth_mask.shape:
        raise DimensionMismatchError("mask shapes differ")
    if target == "Omega":
        iu = np.triu_indices(selected.shape[0], k=1)
        selected, truth_mask = selected[iu], truth_mask[iu]
    tp = int(np.sum(selected & truth_mask))
    fp = int(np.sum(selected & ~truth_mask))
    fn = int(np.sum(~selected & truth_mask))
    tn = int(np.sum(~selected & ~truth_mask))

    def ratio(a, b):
        return a / b if b else None

    return ratio(tp, tp + fn), ratio(tn, tn + fp), ratio(tp, tp + fp)


def r_squared(B_hat, X_test, Y_test) -> np.ndarray:
    """Out-of-sample R^2 per response column."""
    Y_test = np.asarray(Y_test, dtype=float)
    resid = Y_test - np.asarray(X_test, dtype=float) @ np.asarray(B_hat, dtype=float)
    tss = np.sum((Y_test - Y_test.mean(axis=0)) ** 2, axis=0)
    if np.any(tss == 0):
        raise ZeroDivisionError("a test response column is constant")
    return 1 - np.sum(resid**2, axis=0) / tss


def metrics_report(truth: GroundTruth, B_hat, Omega_hat, X, X_test, Y_test,
                   b_selected, omega_selected) -> MetricsReport:
    b_sen, b_spe, b_prc = confusion(b_selected, truth.b_support, "B")
    o_sen, o_spe, o_prc = confusion(omega_selected, truth.omega_support, "Omega")
    return MetricsReport(
        mse_b=mse_elements(B_hat, truth.B0),
        mse_omega=mse_elements(Omega_hat, truth.Omega0),
        prediction_mse=prediction_mse(B_hat, X_test, Y_test),
        avg_kl=avg_kl(truth, B_hat, Omega_hat, X),
        b_sen=b_sen, b_spe=b_spe, b_prc=b_prc,
        omega_sen=o_sen, omega_spe=o_spe, omega_prc=o_prc,
    )
