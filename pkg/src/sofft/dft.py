"""Orthonormal multidimensional DFT plus a brute-force oracle.

Both directions carry the symmetric 1/sqrt(N) normalization, so Parseval
holds exactly: ||x_hat||_2 = ||x||_2.  The fast path applies length-n
transforms axis by axis (row-column); the brute-force path evaluates the
double sum literally and exists only to validate everything downstream.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grid import GridDims, Signal, all_coords

BRUTEFORCE_MAX_N = 2**14


def fft_forward(x: Signal) -> Signal:
    """Forward transform: x_hat_j = N^{-1/2} sum_i omega^{-i.j} x_i."""
    dims = x.dims
    arr = x.values.reshape((dims.n,) * dims.d)
    for axis in range(dims.d):
        arr = np.fft.fft(arr, axis=axis)
    return Signal(dims, arr.reshape(dims.N) / np.sqrt(dims.N), "frequency")


def fft_inverse(xhat: Signal) -> Signal:
    """Inverse transform: x_j = N^{-1/2} sum_i omega^{+i.j} x_hat_i."""
    dims = xhat.dims
    arr = xhat.values.reshape((dims.n,) * dims.d)
    for axis in range(dims.d):
        arr = np.fft.ifft(arr, axis=axis)
    return Signal(dims, arr.reshape(dims.N) * np.sqrt(dims.N), "time")


def ifft_values(values: np.ndarray, dims: GridDims) -> np.ndarray:
    """Inverse transform on a raw value buffer (hot path, no Signal wrapper)."""
    arr = values.reshape((dims.n,) * dims.d)
    for axis in range(dims.d):
        arr = np.fft.ifft(arr, axis=axis)
    return arr.reshape(dims.N) * np.sqrt(dims.N)


def fft_values(values: np.ndarray, dims: GridDims) -> np.ndarray:
    """Forward transform on a raw value buffer (hot path, no Signal wrapper)."""
    arr = values.reshape((dims.n,) * dims.d)
    for axis in range(dims.d):
        arr = np.fft.fft(arr, axis=axis)
    return arr.reshape(dims.N) / np.sqrt(dims.N)


@lru_cache(maxsize=2)
def _twiddle_matrix(dims: GridDims, sign: int) -> np.ndarray:
    coords = all_coords(dims)
    expo = (coords.astype(np.int64) @ coords.T) % dims.n
    mat = np.exp(sign * 2j * np.pi / dims.n * expo)
    mat.setflags(write=False)
    return mat


def dft_bruteforce(x: Signal, direction: str) -> Signal:
    """Literal double-sum DFT; the O(N^2) oracle for the fast transforms.

    direction is 'forward' or 'inverse'.  Guarded to N <= 2**14 to keep the
    quadratic cost bounded.
    """
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    dims = x.dims
    if dims.N > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute-force DFT limited to N <= {BRUTEFORCE_MAX_N}")
    sign = -1 if direction == "forward" else 1
    mat = _twiddle_matrix(dims, sign)
    out = mat @ x.values / np.sqrt(dims.N)
    domain = "frequency" if direction == "forward" else "time"
    return Signal(dims, out, domain)
