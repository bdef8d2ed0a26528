"""Pseudorandom spectrum permutations.

An odd-determinant matrix sigma mod n together with grid points q and a
defines the index permutation pi(i) = sigma (i - q) mod n and the
frequency-domain operator that relabels spectrum entries and modulates
them with unit phases.  Odd determinant is exactly invertibility over
GF(2), hence invertibility mod any power of two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridDims, Signal, all_coords, canonical, flatten


def det_parity(mat) -> int:
    """Parity of the determinant via Gaussian elimination over GF(2)."""
    m = np.asarray(mat, dtype=np.int64) % 2
    m = m.copy()
    d = m.shape[0]
    for col in range(d):
        pivot = None
        for row in range(col, d):
            if m[row, col]:
                pivot = row
                break
        if pivot is None:
            return 0
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
        for row in range(col + 1, d):
            if m[row, col]:
                m[row] ^= m[col]
    return 1


def sample_sigma(dims: GridDims, rng: np.random.Generator) -> np.ndarray:
    """Uniform odd-determinant d x d matrix mod n, by rejection sampling."""
    while True:
        mat = rng.integers(0, dims.n, size=(dims.d, dims.d))
        if det_parity(mat):
            return mat


def sample_sigma_batch(dims: GridDims, count: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized rejection sampling of `count` odd-determinant matrices.

    Determinant parity of a 0/1 matrix is computed exactly from the float
    determinant (|det| <= d!, far below 2^53 for any sane d).
    """
    out = []
    have = 0
    while have < count:
        batch = rng.integers(0, dims.n, size=(2 * (count - have) + 8, dims.d, dims.d))
        dets = np.rint(np.linalg.det(batch % 2)).astype(np.int64) % 2
        good = batch[dets == 1]
        out.append(good)
        have += len(good)
    return np.concatenate(out)[:count]


@dataclass(frozen=True)
class PermSpec:
    """(sigma, q, a) defining one pseudorandom spectrum permutation."""

    sigma: np.ndarray
    q: np.ndarray
    a: np.ndarray
    dims: GridDims

    def __post_init__(self):
        if self.sigma.shape != (self.dims.d, self.dims.d):
            raise ValueError("sigma has wrong shape")
        if not det_parity(self.sigma):
            raise ValueError("sigma must have odd determinant")


def sample_spec(dims: GridDims, rng: np.random.Generator) -> PermSpec:
    """Uniform PermSpec: odd-determinant sigma plus uniform q and a."""
    sigma = sample_sigma(dims, rng)
    q = canonical(rng.integers(0, dims.n, size=dims.d), dims.n)
    a = canonical(rng.integers(0, dims.n, size=dims.d), dims.n)
    return PermSpec(sigma, q, a, dims)


def apply_pi(spec: PermSpec, i) -> np.ndarray:
    """pi(i) = sigma (i - q) mod n, canonicalized.  Accepts (..., d) arrays."""
    v = np.asarray(i) - spec.q
    return canonical(v @ spec.sigma.T, spec.dims.n)


def offset(spec: PermSpec, i, j) -> np.ndarray:
    """Offset of j relative to i under the permutation: pi(j) - pi(i) mod n."""
    return canonical(apply_pi(spec, j) - apply_pi(spec, i), spec.dims.n)


def permute_spectrum(spec: PermSpec, xhat: Signal) -> Signal:
    """Apply the frequency-domain operator.

    Output entry at i is the input at sigma^T (i - a), times the unit phase
    omega^{i . sigma q}.  Norm-preserving: a relabeling plus unit phases.
    """
    if xhat.domain != "frequency":
        raise ValueError("permute_spectrum expects a frequency-domain signal")
    dims = spec.dims
    coords = all_coords(dims)
    src = canonical((coords - spec.a) @ spec.sigma, dims.n)
    expo = (coords @ (spec.sigma @ spec.q)) % dims.n
    phase = np.exp(2j * np.pi / dims.n * expo)
    out = xhat.values[flatten(src, dims)] * phase
    return Signal(dims, out, "frequency")
