"""Seedable random primitives.

All gamma-type draws use the shape-scale parameterization: ``Gamma(a, s)``
has mean ``a * s`` and ``InvGamma(a, s)`` has density proportional to
``x**(-a - 1) * exp(-s / x)``. Shape and scale may be arrays; they broadcast.
"""
import numpy as np


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; equal seeds give bit-identical streams."""
    return np.random.default_rng(seed)


def std_normal_vec(length: int, rng: np.random.Generator) -> np.ndarray:
    if length < 0:
        raise ValueError("length must be >= 0")
    return rng.standard_normal(length)


def _check_positive(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite and strictly positive")
    return arr


def gamma_draw(shape, scale, rng: np.random.Generator):
    shape = _check_positive("shape", shape)
    scale = _check_positive("scale", scale)
    out = rng.standard_gamma(shape, size=np.broadcast(shape, scale).shape) * scale
    return float(out) if out.ndim == 0 else out


def inv_gamma_draw(shape, scale, rng: np.random.Generator):
    shape = _check_positive("shape", shape)
    scale = _check_positive("scale", scale)
    g = rng.standard_gamma(shape, size=np.broadcast(shape, scale).shape)
    out = scale / g
    return float(out) if out.ndim == 0 else out


def half_cauchy_draw(rng: np.random.Generator, size=None):
    """Standard half-Cauchy via its inverse-gamma mixture.

    ``a ~ InvGamma(1/2, 1)`` then ``x**2 | a ~ InvGamma(1/2, 1/a)``.
    """
    a = inv_gamma_draw(0.5, np.ones(() if size is None else size), rng)
    x2 = inv_gamma_draw(0.5, 1.0 / np.asarray(a), rng)
    return np.sqrt(x2)
