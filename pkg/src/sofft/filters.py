"""Boxcar-power bucket filters.

The base filter is a frequency-domain boxcar of width b - 1 whose inverse
transform is the Dirichlet kernel.  Convolving the boxcar with itself F
times sharpens the polynomial decay; in d dimensions the filter is the
tensor product of the 1-d kernel across coordinates.  The frequency-domain
support stays compact ([-Fb, Fb]^d), which is what bounds the number of
spectrum samples each hashing round consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridDims, flatten


def build_boxcar(b: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Frequency-domain boxcar: value sqrt(n)/(b-1) on the b-1 indices |i| < b/2.

    Returns (offsets, weights) with offsets in the centered residue set.
    The normalization makes the time-domain value at 0 exactly 1.
    """
    if b & (b - 1) or not 4 <= b <= n:
        raise ValueError(f"b must be a power of two with 4 <= b <= n, got b={b}, n={n}")
    offsets = np.arange(-(b // 2 - 1), b // 2)
    weights = np.full(b - 1, np.sqrt(n) / (b - 1))
    return offsets, weights


def dirichlet_power(j, b: int, n: int, F: int) -> np.ndarray:
    """Closed-form time-domain filter: the Dirichlet kernel raised to F.

    Equals 1 at j = 0 and sin(pi (b-1) j / n) / ((b-1) sin(pi j / n)) ** F
    elsewhere.  Real-valued for all integer j.
    """
    j = np.asarray(j, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.sin(np.pi * (b - 1) * j / n) / ((b - 1) * np.sin(np.pi * j / n))
    base = np.where(j == 0, 1.0, base)
    return base**F


def build_hf(b: int, F: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """F-fold self-convolution of the boxcar, scaled to match the closed form.

    The scaling n^{-(F-1)/2} makes the orthonormal inverse transform of the
    result equal the pointwise F-th power of the Dirichlet kernel; this is
    pinned by a numerical test.  Convolution is done directly on the compact
    support, so the result is exact up to float rounding.
    """
    if F < 1:
        raise ValueError(f"F must be >= 1, got {F}")
    offsets, weights = build_boxcar(b, n)
    half = F * (b // 2 - 1)
    if half > n // 2 - 1:
        raise ValueError(
            f"filter support would wrap: F={F}, b={b} needs half-width {half} "
            f"but n={n} only admits {n // 2 - 1}"
        )
    conv = weights
    for _ in range(F - 1):
        conv = np.convolve(conv, weights)
    conv = conv / n ** ((F - 1) / 2)
    return np.arange(-half, half + 1), conv


@dataclass(frozen=True)
class Filter:
    """Tensor-product bucket filter with compact frequency support.

    freq_offsets / freq_weights describe the 1-d frequency profile; the
    d-dimensional support is its d-fold tensor product.  time_value gives
    the closed-form time-domain filter at arbitrary grid coordinates.
    """

    b: int
    F: int
    dims: GridDims
    freq_offsets: np.ndarray
    freq_weights: np.ndarray

    @property
    def support_width(self) -> int:
        return len(self.freq_offsets)

    @property
    def support_size(self) -> int:
        """Number of frequency-domain support points in d dimensions."""
        return self.support_width**self.dims.d

    def time_value(self, j) -> np.ndarray:
        """Evaluate the time-domain filter at coordinates j (shape (..., d))."""
        vals = dirichlet_power(np.asarray(j), self.b, self.dims.n, self.F)
        return vals.prod(axis=-1)

    def support_coords(self) -> np.ndarray:
        """All d-dimensional support coordinates, shape (support_size, d)."""
        grids = np.meshgrid(*([self.freq_offsets] * self.dims.d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def support_weights(self) -> np.ndarray:
        """Tensor-product weights aligned with support_coords()."""
        w = self.freq_weights
        out = w
        for _ in range(self.dims.d - 1):
            out = np.multiply.outer(out, w)
        return out.ravel()

    def dense_freq(self) -> np.ndarray:
        """Full length-N frequency-domain vector (zero off support)."""
        out = np.zeros(self.dims.N)
        out[flatten(self.support_coords(), self.dims)] = self.support_weights()
        return out


def build_tensor_filter(b: int, F: int, dims: GridDims) -> Filter:
    """Construct the d-dimensional filter from the 1-d profile."""
    offsets, weights = build_hf(b, F, dims.n)
    return Filter(b, F, dims, offsets, weights)


@dataclass(frozen=True)
class FilterBoundsReport:
    """Worst-case margins of the two decay bounds over an exhaustive scan."""

    plateau_ok: bool
    plateau_min: float
    plateau_max: float
    decay_ok: bool
    decay_margin: float  # min over j of bound(j) - |G_j|; >= 0 iff the bound holds

    @property
    def all_ok(self) -> bool:
        return self.plateau_ok and self.decay_ok


def check_filter_bounds(filt: Filter) -> FilterBoundsReport:
    """Exhaustively verify the plateau and decay bounds of the filter.

    Plateau: G_j in [(2 pi)^{-F d}, 1] whenever ||j||_inf <= n / (2 b).
    Decay:   |G_j| <= (2 / (1 + (b/n) ||j||_inf))^F for every j.
    """
    dims = filt.dims
    from .grid import all_coords

    coords = all_coords(dims)
    vals = filt.time_value(coords)
    linf = np.abs(coords).max(axis=-1)

    near = linf <= dims.n / (2 * filt.b)
    lo = (2 * np.pi) ** (-filt.F * dims.d)
    plateau_min = float(vals[near].min())
    plateau_max = float(vals[near].max())
    plateau_ok = plateau_min >= lo and plateau_max <= 1.0 + 1e-12

    bound = (2.0 / (1.0 + (filt.b / dims.n) * linf)) ** filt.F
    decay_margin = float((bound - np.abs(vals)).min())
    decay_ok = decay_margin >= -1e-12

    return FilterBoundsReport(plateau_ok, plateau_min, plateau_max, decay_ok, decay_margin)


def experiment_bucket_side(k: int, n: int) -> int:
    """Bucket side for the support-recovery experiments.

    The boxcar support should have about k + 1 entries; with a power-of-two
    side b the support holds b - 1 entries, so round b up from k + 2.
    """
    b = 4
    while b - 1 < k + 1:
        b *= 2
    if b > n:
        raise ValueError(f"k={k} needs bucket side {b} > n={n}")
    return b
