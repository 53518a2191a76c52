"""Horseshoe / graphical horseshoe Gibbs sampling for multivariate regression.

Joint Bayesian estimation of a sparse coefficient matrix ``B`` and a sparse
error precision matrix ``Omega`` in ``Y = XB + E``, rows of ``E`` i.i.d.
``N(0, Omega^-1)``.
"""
__version__ = "0.1.0"

from .types import (ChainState, Dataset, GibbsConfig, GroundTruth,  # noqa: E402
                    PosteriorSamples, compress_triangle, expand_triangle,
                    validate_dataset)
from .sampler import gibbs_step, log_likelihood, run_chain  # noqa: E402
from .summary import credible_interval, posterior_mean, select_by_interval  # noqa: E402

__all__ = [
    "ChainState", "Dataset", "GibbsConfig", "GroundTruth", "PosteriorSamples",
    "compress_triangle", "expand_triangle", "validate_dataset",
    "gibbs_step", "log_likelihood", "run_chain",
    "credible_interval", "posterior_mean", "select_by_interval",
]
