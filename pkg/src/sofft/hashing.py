"""The measurement primitive: bucketed hashing of the spectrum.

A hashing round reads the spectrum only at the (permuted) filter support,
multiplies by the filter, and inverse-transforms, so every time-domain
position carries a bucket estimate of the signal coefficient mapped near
it.  Rounds are built once and reused across all recovery iterations;
subtracting a sparse estimate touches no new spectrum samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dft import ifft_values
from .filters import Filter
from .grid import GridDims, Signal, all_coords, canonical, flatten, linf_dist
from .permute import PermSpec, apply_pi


class SampleOracle:
    """Counting access to a spectrum; tracks distinct positions read."""

    def __init__(self, spectrum: Signal):
        if spectrum.domain != "frequency":
            raise ValueError("SampleOracle wraps a frequency-domain signal")
        self.dims = spectrum.dims
        self._values = spectrum.values
        self._seen = np.zeros(spectrum.dims.N, dtype=bool)

    def read(self, flat_positions: np.ndarray) -> np.ndarray:
        self._seen[flat_positions] = True
        return self._values[flat_positions]

    @property
    def samples_used(self) -> int:
        """Number of distinct spectrum positions read so far."""
        return int(self._seen.sum())


@dataclass
class HashRound:
    """One hashing round: permutation spec, bucket vector, and lookup tables.

    The tables are fixed by (spec, filter) alone:
      src_flat    spectrum positions the round reads (one per support point),
      supp_flat   where those reads land in the permuted product vector,
      supp_coef   filter weight times modulation phase at each support point,
      perm_flat   flat pi(f) for every f, for bucket lookup,
      est_phase   conjugate demodulation phase per f.
    """

    spec: PermSpec
    filt: Filter
    u: np.ndarray
    samples_used: int
    src_flat: np.ndarray = field(repr=False)
    supp_flat: np.ndarray = field(repr=False)
    supp_coef: np.ndarray = field(repr=False)
    perm_flat: np.ndarray = field(repr=False)
    est_phase: np.ndarray = field(repr=False)


def round_tables(spec: PermSpec, filt: Filter):
    """Precompute the gather/scatter tables shared by all uses of a round."""
    dims = spec.dims
    supp = filt.support_coords()
    src = canonical((supp - spec.a) @ spec.sigma, dims.n)
    expo = (supp @ (spec.sigma @ spec.q)) % dims.n
    coef = filt.support_weights() * np.exp(2j * np.pi / dims.n * expo)

    coords = all_coords(dims)
    perm_flat = flatten(apply_pi(spec, coords), dims)
    est_expo = (coords @ (spec.sigma.T @ spec.a)) % dims.n
    est_phase = np.exp(-2j * np.pi / dims.n * est_expo)
    return flatten(src, dims), flatten(supp, dims), coef, perm_flat, est_phase


def hash_spectrum_values(supp_values, supp_flat, supp_coef, dims: GridDims) -> np.ndarray:
    """sqrt(N) * inverse transform of the filtered, permuted spectrum."""
    z = np.zeros(dims.N, dtype=complex)
    z[supp_flat] = supp_values * supp_coef
    return np.sqrt(dims.N) * ifft_values(z, dims)


def hash_signal(oracle: SampleOracle, filt: Filter, spec: PermSpec) -> HashRound:
    """Build one hashing round, reading the spectrum at the permuted support."""
    dims = spec.dims
    src_flat, supp_flat, coef, perm_flat, est_phase = round_tables(spec, filt)
    vals = oracle.read(src_flat)
    u = hash_spectrum_values(vals, supp_flat, coef, dims)
    return HashRound(
        spec, filt, u, len(src_flat), src_flat, supp_flat, coef, perm_flat, est_phase
    )


def estimate_all(rnd: HashRound, v: np.ndarray | None = None) -> np.ndarray:
    """Demodulated bucket estimate for every coordinate: v[pi(f)] * conj phase."""
    buckets = rnd.u if v is None else v
    return buckets[rnd.perm_flat] * rnd.est_phase


def estimate_at(rnd: HashRound, i) -> complex:
    """Demodulated bucket estimate of a single coordinate."""
    flat = int(flatten(np.asarray(i), rnd.spec.dims))
    return complex(estimate_all(rnd)[flat])


def subtract_spectrum(rnd: HashRound, spectrum_values: np.ndarray) -> np.ndarray:
    """Bucket vector of (signal - given spectrum); consumes no oracle samples."""
    hashed = hash_spectrum_values(
        spectrum_values[rnd.src_flat], rnd.supp_flat, rnd.supp_coef, rnd.spec.dims
    )
    return rnd.u - hashed


def subtract_sparse(rnd: HashRound, chi: dict, filt: Filter) -> np.ndarray:
    """Bucket vector with a sparse estimate's influence removed.

    chi maps flat index to complex amplitude; its dense spectrum is computed
    locally, so the oracle counter is untouched.
    """
    from .dft import fft_values

    dims = rnd.spec.dims
    dense = np.zeros(dims.N, dtype=complex)
    if chi:
        idx = np.fromiter(chi.keys(), dtype=np.int64, count=len(chi))
        dense[idx] = np.fromiter(chi.values(), dtype=complex, count=len(chi))
    return subtract_spectrum(rnd, fft_values(dense, dims))


def isolation_scales(dims: GridDims, b: int):
    """Scales t with radius (n/b) * 2^(t+2) still below n/2."""
    t = 0
    while (dims.n // b) * 2 ** (t + 2) < dims.n / 2:
        yield t
        t += 1


def is_isolated(S: np.ndarray, spec: PermSpec, i, alpha: float, b: int) -> bool:
    """Whether i has at most the allowed number of competitors at every scale.

    S is an array of coordinate vectors (m, d).  At scale t the ball of
    radius (n/b) * 2^(t+2) around pi(i) may contain at most
    alpha^(d/2) * 2^((t+3) d) * 2^t other permuted elements of S.
    """
    dims = spec.dims
    S = np.asarray(S).reshape(-1, dims.d)
    i = np.asarray(i)
    pi_i = apply_pi(spec, i)
    pi_S = apply_pi(spec, S)
    others = ~np.all(S == i, axis=-1)
    if not others.any():
        return True
    dist = linf_dist(pi_S[others], pi_i, dims)
    for t in isolation_scales(dims, b):
        radius = (dims.n // b) * 2 ** (t + 2)
        allowed = alpha ** (dims.d / 2) * 2 ** ((t + 3) * dims.d) * 2**t
        if np.count_nonzero(dist <= radius) > allowed:
            return False
    return True


def well_hashed_error(x: Signal, S: np.ndarray, spec: PermSpec, filt: Filter, i) -> float:
    """Squared bucket-estimate error of i on the tail of x (x zeroed on S).

    Self-test instrumentation for the tail-noise analysis; production
    recovery never calls this.
    """
    from .dft import fft_values

    dims = x.dims
    tail = x.values.copy()
    S = np.asarray(S).reshape(-1, dims.d)
    tail[flatten(S, dims)] = 0.0
    tailhat = fft_values(tail, dims)
    src_flat, supp_flat, coef, perm_flat, est_phase = round_tables(spec, filt)
    u = hash_spectrum_values(tailhat[src_flat], supp_flat, coef, dims)
    flat_i = int(flatten(np.asarray(i), dims))
    est = u[perm_flat[flat_i]] * est_phase[flat_i]
    return float(np.abs(est - tail[flat_i]) ** 2)
