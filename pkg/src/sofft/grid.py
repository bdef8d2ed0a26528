"""d-dimensional grid arithmetic, circular norms, and signal statistics.

Indices live on the centered residue set [-n/2, n/2 - 1] for a power-of-two
side length n.  The flat memory layout is row-major over coordinates shifted
into [0, n); the bijection is locked by tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class GridDims:
    """Grid geometry: dimension count d and power-of-two side length n."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"side length must be a power of two >= 2, got {self.n}")

    @property
    def N(self) -> int:
        return self.n**self.d


def canonical(v, n: int):
    """Reduce residues into the centered set [-n/2, n/2 - 1]."""
    return (np.asarray(v) + n // 2) % n - n // 2


@dataclass(frozen=True)
class Signal:
    """Dense complex vector over a grid, tagged time- or frequency-domain."""

    dims: GridDims
    values: np.ndarray
    domain: str  # 'time' or 'frequency'

    def __post_init__(self):
        if self.domain not in ("time", "frequency"):
            raise ValueError(f"bad domain tag {self.domain!r}")
        if self.values.shape != (self.dims.N,):
            raise ValueError(
                f"expected {self.dims.N} values, got shape {self.values.shape}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def flatten(i, dims: GridDims):
    """Map canonical grid coordinates to the row-major flat index.

    Accepts a single coordinate vector or an (..., d) array.
    """
    shifted = np.asarray(i) % dims.n
    strides = dims.n ** np.arange(dims.d - 1, -1, -1)
    return shifted @ strides


def unflatten(flat, dims: GridDims):
    """Inverse of :func:`flatten`; returns canonical coordinates."""
    flat = np.asarray(flat)
    coords = np.empty(flat.shape + (dims.d,), dtype=np.int64)
    rest = flat
    for s in range(dims.d - 1, -1, -1):
        coords[..., s] = rest % dims.n
        rest = rest // dims.n
    return canonical(coords, dims.n)


@lru_cache(maxsize=8)
def all_coords(dims: GridDims) -> np.ndarray:
    """Canonical coordinates of every grid point, shape (N, d), flat order."""
    coords = unflatten(np.arange(dims.N), dims)
    coords.setflags(write=False)
    return coords


def circ_dist(a, b, n: int):
    """Circular distance on Z_n; symmetric and at most n/2."""
    m = np.abs(np.asarray(a) - np.asarray(b)) % n
    return np.minimum(m, n - m)


def linf_dist(i, j, dims: GridDims):
    """Max over coordinates of the circular distance (l-infinity on the torus)."""
    return circ_dist(np.asarray(i), np.asarray(j), dims.n).max(axis=-1)


def err_k(x: Signal, k: int) -> float:
    """l2 norm of x with its k largest-magnitude entries removed.

    Ties are broken by lowest flat index for determinism.
    """
    if not 0 <= k <= x.dims.N:
        raise ValueError(f"k must lie in [0, {x.dims.N}], got {k}")
    mags = np.abs(x.values)
    order = np.argsort(-mags, kind="stable")
    return float(np.linalg.norm(x.values[order[k:]]))


def noise_level(x: Signal, k: int) -> float:
    """Per-coordinate tail scale err_k(x) / sqrt(k)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return err_k(x, k) / np.sqrt(k)
