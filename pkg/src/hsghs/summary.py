"""Posterior point estimates, credible intervals, selection and ROC sweeps.

Quantiles use linear interpolation between order statistics (numpy's
``"linear"`` method, Hyndman-Fan type 7).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import PosteriorSamples

QUANTILE_METHOD = "linear"


@dataclass
class Intervals:
    b_lo: np.ndarray      # (p, q)
    b_hi: np.ndarray
    omega_lo: np.ndarray  # (q, q), symmetric
    omega_hi: np.ndarray
    level: float


@dataclass
class SelectionResult:
    b_selected: np.ndarray      # (p, q) bool
    omega_selected: np.ndarray  # (q, q) bool, symmetric, False on diagonal
    level: float


def posterior_mean(samples: PosteriorSamples, stat: str = "mean"):
    """Point estimates ``(B_hat, Omega_hat)``; ``stat`` is "mean" or "median"."""
    if samples.nmc < 1:
        raise ValueError("no posterior draws")
    _, p, q = samples.dims
    reduce = {"mean": np.mean, "median": np.median}[stat]
    B_hat = reduce(samples.beta_draws, axis=0).reshape(p, q)
    tri = reduce(samples.omega_draws, axis=0)
    Omega_hat = np.empty((q, q))
    iu = np.triu_indices(q)
    Omega_hat[iu] = tri
    Omega_hat[iu[1], iu[0]] = tri
    return B_hat, Omega_hat


def _check_level(level):
    if not 0 < level < 1:
        raise ValueError(f"credible level must be in (0, 1), got {level}")


def credible_interval(samples: PosteriorSamples, level: float = 0.75) -> Intervals:
    """Equal-tailed intervals between the (1-level)/2 and (1+level)/2 quantiles."""
    _check_level(level)
    if samples.nmc < 2:
        raise ValueError("need at least two draws for an interval")
    _, p, q = samples.dims
    probs = [(1 - level) / 2, (1 + level) / 2]
    b_lo, b_hi = np.quantile(samples.beta_draws, probs, axis=0, method=QUANTILE_METHOD)
    o_lo, o_hi = np.quantile(samples.omega_draws, probs, axis=0, method=QUANTILE_METHOD)
    iu = np.triu_indices(q)

    def full(tri):
        M = np.empty((q, q))
        M[iu] = tri
        M[iu[1], iu[0]] = tri
        return M

    return Intervals(b_lo.reshape(p, q), b_hi.reshape(p, q), full(o_lo), full(o_hi), level)


def select_by_interval(intervals: Intervals) -> SelectionResult:
    """An element is selected when its interval excludes zero."""
    b_sel = (intervals.b_lo > 0) | (intervals.b_hi < 0)
    o_sel = (intervals.omega_lo > 0) | (intervals.omega_hi < 0)
    np.fill_diagonal(o_sel, False)
    return SelectionResult(b_sel, o_sel, intervals.level)


def _pair_mask(q):
    return np.triu(np.ones((q, q), dtype=bool), k=1)


def rates(selected, truth):
    """``(fpr, tpr)``; a rate with an empty denominator is NaN."""
    selected = np.asarray(selected, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    tp = np.sum(selected & truth)
    fp = np.sum(selected & ~truth)
    pos = np.sum(truth)
    neg = truth.size - pos
    fpr = fp / neg if neg else np.nan
    tpr = tp / pos if pos else np.nan
    return float(fpr), float(tpr)


def roc_sweep_bayes(samples: PosteriorSamples, truth_mask, target: str = "B",
                    grid=None):
    """One ``(fpr, tpr)`` pair per credible level in ``grid``.

    For ``target="Omega"`` only the strictly upper triangle is scored.
    """
    if grid is None:
        grid = np.round(np.arange(1, 100) / 100, 2)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid >= 1):
        raise ValueError("levels must lie in (0, 1)")
    _, p, q = samples.dims
    truth_mask = np.asarray(truth_mask, dtype=bool)
    if target == "B":
        draws = samples.beta_draws
        truth = truth_mask.ravel()
    elif target == "Omega":
        iu = np.triu_indices(q)
        off = iu[0] != iu[1]
        draws = samples.omega_draws[:, off]
        truth = truth_mask[iu[0][off], iu[1][off]]
    else:
        raise ValueError(f"unknown target {target!r}")
    lo = np.quantile(draws, (1 - grid) / 2, axis=0, method=QUANTILE_METHOD)
    hi = np.quantile(draws, (1 + grid) / 2, axis=0, method=QUANTILE_METHOD)
    selected = (lo > 0) | (hi < 0)
    return [rates(sel, truth) for sel in selected]


def roc_sweep_threshold(estimate, truth_mask, grid=None, target: str = "B"):
    """``(fpr, tpr)`` for ``|estimate| > t`` at each threshold ``t`` in ``grid``.

    The default grid is 0 followed by the sorted distinct magnitudes.
    """
    estimate = np.asarray(estimate, dtype=float)
    truth_mask = np.asarray(truth_mask, dtype=bool)
    if target == "Omega":
        mask = _pair_mask(estimate.shape[0])
        est, truth = np.abs(estimate[mask]), truth_mask[mask]
    else:
        est, truth = np.abs(estimate.ravel()), truth_mask.ravel()
    if grid is None:
        grid = default_threshold_grid(estimate, target)
    return [rates(est > t, truth) for t in grid]


def default_threshold_grid(estimate, target: str = "B"):
    estimate = np.asarray(estimate, dtype=float)
    if target == "Omega":
        vals = np.abs(estimate[_pair_mask(estimate.shape[0])])
    else:
        vals = np.abs(estimate.ravel())
    return np.unique(np.concatenate([[0.0], vals]))
