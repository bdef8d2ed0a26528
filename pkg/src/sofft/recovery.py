"""Iterative-thresholding recovery with measurement reuse.

All hashing rounds are sampled and built once up front; the outer loop
then repeatedly locates coordinates whose median bucket estimate clears a
geometrically decreasing threshold and folds them into the running sparse
estimate.  No new spectrum samples are taken after round construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dft import fft_values
from .filters import Filter, build_tensor_filter, experiment_bucket_side
from .grid import GridDims
from .hashing import HashRound, SampleOracle, estimate_all, hash_signal, subtract_spectrum
from .permute import sample_spec


@dataclass
class RecoveryParams:
    """Knobs for the recovery loop.

    Theory mode uses F = 2d, bucket count at least k / (eps * alpha^d), a
    power-of-two threshold schedule ending at 4 sqrt(eps) mu, and T derived
    from the signal-to-noise bound.  Experiment mode uses the plain boxcar
    (F = 1) sized from k, a gentler decay ratio, and a threshold floor in
    place of a known noise level.
    """

    k: int
    eps: float = 0.1
    alpha: float = 0.25
    b: int = 0
    F: int = 1
    r_max: int = 18
    ratio: float = 1.2
    T: int | None = None
    nu0: float | None = None
    mu: float = 0.0
    rstar: float | None = None
    nu_floor: float = 0.0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.r_max < 1:
            raise ValueError(f"r_max must be >= 1, got {self.r_max}")
        if self.ratio <= 1:
            raise ValueError(f"ratio must exceed 1, got {self.ratio}")
        if self.T is not None and self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")

    def bucket_count(self, d: int) -> int:
        return self.b**d

    @classmethod
    def theory(
        cls,
        dims: GridDims,
        k: int,
        eps: float,
        mu: float,
        rstar: float,
        alpha: float = 0.25,
        r_max: int = 20,
    ) -> "RecoveryParams":
        """Theory-mode parameters: B >= k / (eps alpha^d), F = 2d, ratio 2."""
        target = k / (eps * alpha**dims.d)
        b = 4
        while b**dims.d < target:
            b *= 2
        F = 2 * dims.d
        if F * (b // 2 - 1) > dims.n // 2 - 1:
            raise ValueError(
                f"theory-mode bucket side b={b} does not fit n={dims.n}; "
                "increase alpha or eps"
            )
        T = max(1, math.ceil(math.log2(max(rstar, 2.0))))
        nu0 = 4 * math.sqrt(eps) * mu * 2 ** (T - 1)
        return cls(
            k=k, eps=eps, alpha=alpha, b=b, F=F, r_max=r_max, ratio=2.0,
            T=T, nu0=nu0, mu=mu, rstar=rstar,
        )

    @classmethod
    def experiment(
        cls,
        dims: GridDims,
        k: int,
        r_max: int = 18,
        ratio: float = 1.2,
        nu_floor: float = 0.2,
    ) -> "RecoveryParams":
        """Experiment-mode parameters: plain boxcar with about k + 1 taps."""
        b = experiment_bucket_side(k, dims.n)
        return cls(k=k, b=b, F=1, r_max=r_max, ratio=ratio, nu_floor=nu_floor)


def median_complex(values) -> complex:
    """Coordinatewise median: median of real parts + i * median of imaginary."""
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("median of empty multiset")
    return complex(np.median(values.real) + 1j * np.median(values.imag))


def locate_and_estimate(
    rounds: list[HashRound], chi: dict, filt: Filter, nu: float
) -> dict:
    """One locate-and-estimate pass over the residual signal.

    For every coordinate f the demodulated bucket values of the residual are
    collected across rounds and reduced by a coordinatewise median; f enters
    the output exactly when the median magnitude exceeds nu / 2.
    """
    dims = rounds[0].spec.dims
    dense = np.zeros(dims.N, dtype=complex)
    if chi:
        idx = np.fromiter(chi.keys(), dtype=np.int64, count=len(chi))
        dense[idx] = np.fromiter(chi.values(), dtype=complex, count=len(chi))
        chihat = fft_values(dense, dims)
    else:
        chihat = dense

    est = np.empty((len(rounds), dims.N), dtype=complex)
    for r, rnd in enumerate(rounds):
        v = subtract_spectrum(rnd, chihat)
        est[r] = estimate_all(rnd, v)

    eta = np.median(est.real, axis=0) + 1j * np.median(est.imag, axis=0)
    located = np.flatnonzero(np.abs(eta) > nu / 2)
    return {int(f): complex(eta[f]) for f in located}


def sparse_fft(
    oracle: SampleOracle,
    params: RecoveryParams,
    rng: np.random.Generator,
    info: dict | None = None,
) -> dict:
    """Recover a sparse estimate of the signal from spectrum samples.

    Returns a map flat-index -> complex amplitude.  All r_max hashing rounds
    are sampled up front and reused for every iteration; the oracle counter
    is final once the rounds exist.  `info`, when given, is filled with
    diagnostics (samples used, iteration count, threshold schedule).
    """
    dims = oracle.dims
    if params.b < 4:
        raise ValueError("params.b is unset; use RecoveryParams.theory/experiment")
    filt = build_tensor_filter(params.b, params.F, dims)

    rounds = [
        hash_signal(oracle, filt, sample_spec(dims, rng)) for _ in range(params.r_max)
    ]
    counter_after_rounds = oracle.samples_used

    nu0 = params.nu0
    if nu0 is None:
        nu0 = max(float(np.abs(rnd.u).max()) for rnd in rounds)
    floor = max(4 * math.sqrt(params.eps) * params.mu, params.nu_floor)
    T = params.T
    if T is None:
        if floor <= 0 or nu0 <= floor:
            T = 1
        else:
            T = 1 + math.ceil(math.log(nu0 / floor) / math.log(params.ratio))

    chi: dict = {}
    schedule = []
    ever_located: set = set()
    for t in range(T):
        nu = nu0 / params.ratio**t
        schedule.append(nu)
        chi_prime = locate_and_estimate(rounds, chi, filt, nu)
        ever_located.update(chi_prime)
        for f, val in chi_prime.items():
            new = chi.get(f, 0j) + val
            if new == 0:
                chi.pop(f, None)
            else:
                chi[f] = new

    assert oracle.samples_used == counter_after_rounds, "oracle grew after rounds"
    if info is not None:
        info.update(
            samples_used=sum(rnd.samples_used for rnd in rounds),
            distinct_positions=oracle.samples_used,
            iterations=T,
            thresholds=schedule,
            ever_located=ever_located,
            filter_support=filt.support_size,
            r_max=params.r_max,
        )
    return chi
