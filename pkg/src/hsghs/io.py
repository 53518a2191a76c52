"""File formats.

Matrices are header-less CSV, one row per line, values written with 17
significant digits so they round-trip exactly.

Sample streams (``.hsgs``) are little-endian binary::

    b"HSGS"                     magic, 4 bytes
    u32 version = 1
    u64 n, u64 p, u64 q, u64 nmc
    nmc records, each: p*q float64 (beta, vec(B') order)
                       q(q+1)/2 float64 (Omega upper triangle, row-major)
"""
from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .types import GibbsConfig, PosteriorSamples, triangle_size

MAGIC = b"HSGS"
VERSION = 1
_HEADER = struct.Struct("<4sI4Q")


class SampleFormatError(ValueError):
    pass


def _atomic_write(path, data: bytes):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_csv(M) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return "".join(",".join(format(v, ".17g") for v in row) + "\n" for row in M)


def write_csv(path, M):
    _atomic_write(path, format_csv(M).encode())


def read_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)


def write_json(path, obj):
    _atomic_write(path, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())


def encode_samples(samples: PosteriorSamples) -> bytes:
    n, p, q = samples.dims
    nmc = samples.nmc
    header = _HEADER.pack(MAGIC, VERSION, n, p, q, nmc)
    body = np.hstack([samples.beta_draws, samples.omega_draws]).astype("<f8")
    return header + body.tobytes()


def write_samples(path, samples: PosteriorSamples):
    _atomic_write(path, encode_samples(samples))


def read_header(buf: bytes):
    if len(buf) < _HEADER.size:
        raise SampleFormatError("file too short for a sample-stream header")
    magic, version, n, p, q, nmc = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise SampleFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SampleFormatError(f"unsupported version {version}")
    return {"version": version, "n": n, "p": p, "q": q, "nmc": nmc}


def read_samples(path) -> PosteriorSamples:
    buf = Path(path).read_bytes()
    h = read_header(buf)
    n, p, q, nmc = h["n"], h["p"], h["q"], h["nmc"]
    width = p * q + triangle_size(q)
    body = buf[_HEADER.size:]
    if len(body) != nmc * width * 8:
        raise SampleFormatError(
            f"expected {nmc * width * 8} payload bytes, found {len(body)}")
    records = np.frombuffer(body, dtype="<f8").astype(float).reshape(nmc, width)
    return PosteriorSamples(
        beta_draws=records[:, : p * q].copy(),
        omega_draws=records[:, p * q:].copy(),
        dims=(n, p, q),
        config=GibbsConfig(burnin=0, nmc=max(nmc, 1)),
    )
