"""Desk-scale verification suite for the library's structural guarantees.

Each check is either exact (permutation identity, filter bounds, negative
controls) or Monte-Carlo with fixed seeds and calibrated constants.  The
hashing-tail and isolation checks turn asymptotic statements into
regression tests; their constants were calibrated once and carry
statistical slack.  The permutation-spreading check uses a bound with an
explicit discretization margin: the idealized 2(2t/n)^d form is provably
violated at small t for d >= 2 (counting the 2t+1 lattice points per axis,
not 2t), so the checked bound is 2((2t + 2^g)/n)^d for difference vectors
with a common factor 2^g.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .dft import fft_forward, fft_inverse
from .filters import build_tensor_filter, check_filter_bounds
from .grid import GridDims, Signal, all_coords, canonical, flatten, noise_level
from .hashing import is_isolated, well_hashed_error
from .permute import PermSpec, sample_sigma_batch, sample_spec, permute_spectrum, apply_pi

# Calibrated Monte-Carlo constants (fixed once; see tests for provenance).
HASHING_C = 1.0          # per-bucket tail energy: mean mu2 <= C^d ||x||^2 / B
ISOLATION_C = 0.6        # isolation failure rate <= c * alpha^(d/2)
WELL_HASHED_C = 1.0      # Pr[err^2 > C sqrt(alpha) eps mu^2] <= alpha^(d/2)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _timed(fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return passed, detail, time.perf_counter() - t0


def check_perm_identity(seed: int = 0) -> tuple[bool, str]:
    """Exact demodulation identity of the spectrum permutation, all i."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d, n in ((1, 16), (2, 8)):
        dims = GridDims(d, n)
        coords = all_coords(dims)
        for _ in range(20):
            x = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
            sig = Signal(dims, x, "time")
            spec = sample_spec(dims, rng)
            y = fft_inverse(permute_spectrum(spec, fft_forward(sig))).values
            pi_flat = flatten(apply_pi(spec, coords), dims)
            expo = (coords @ (spec.sigma.T @ spec.a)) % n
            target = x * np.exp(2j * np.pi / n * expo)
            err = np.abs(y[pi_flat] - target).max() / np.linalg.norm(x)
            worst = max(worst, err)
    return worst <= 1e-9, f"worst relative error {worst:.2e}"


def check_filter_lemma() -> tuple[bool, str]:
    """Plateau and decay bounds, exhaustive for the pinned parameter sets."""
    details = []
    ok = True
    for n, b, F, d in ((256, 16, 2, 1), (256, 16, 4, 1), (64, 8, 4, 2)):
        filt = build_tensor_filter(b, F, GridDims(d, n))
        rep = check_filter_bounds(filt)
        g0 = float(filt.time_value(np.zeros((1, d)))[0])
        ok &= rep.all_ok and g0 == 1.0
        details.append(f"(n={n},b={b},F={F},d={d}): bounds={'ok' if rep.all_ok else 'FAIL'}")
    return ok, "; ".join(details)


def check_sigma_spreading(seed: int = 0, draws: int = 10**5) -> tuple[bool, str]:
    """Pr[||sigma v||_inf <= t] against the discretization-corrected bound."""
    rng = np.random.default_rng(seed)
    worst = -1.0
    for n in (16, 64):
        for d in (1, 2):
            dims = GridDims(d, n)
            sigmas = sample_sigma_batch(dims, draws, rng)
            for g in (0, 1, 2):
                v = np.zeros(d, dtype=np.int64)
                v[0] = 2**g
                if d > 1:
                    v[1] = (3 * 2**g) % n
                img = canonical(np.einsum("mij,j->mi", sigmas, v), n)
                linf = np.abs(img).max(axis=1)
                for t in range(0, n // 2):
                    p = float((linf <= t).mean())
                    bound = 2 * ((2 * t + 2**g) / n) ** d
                    se = math.sqrt(max(p * (1 - p), 1e-12) / draws)
                    worst = max(worst, p - bound - 3 * se)
    return worst <= 0, f"worst excess over corrected bound {worst:.4f}"


def check_hashing_tail(seed: int = 0, specs: int = 1000) -> tuple[bool, str]:
    """Mean per-bucket tail energy <= C^d ||x||^2 / B over random permutations."""
    rng = np.random.default_rng(seed)
    details = []
    ok = True
    for d, n, b in ((1, 256, 16), (2, 16, 4)):
        dims = GridDims(d, n)
        filt = build_tensor_filter(b, 2 * d, dims)
        coords = all_coords(dims)
        x = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
        i = coords[rng.integers(dims.N)]
        total = 0.0
        for _ in range(specs):
            spec = sample_spec(dims, rng)
            off = canonical((coords - i) @ spec.sigma.T, n)
            gains = filt.time_value(off) ** 2
            total += float((np.abs(x) ** 2 * gains).sum() - np.abs(x[flatten(i, dims)]) ** 2)
        mean = total / specs
        allowed = HASHING_C**d * np.linalg.norm(x) ** 2 / b**d
        ok &= mean <= allowed
        details.append(f"d={d}: mean {mean:.3f} <= {allowed:.3f}")
    return ok, "; ".join(details)


def check_isolation(seed: int = 0, specs: int = 10**4) -> tuple[bool, str]:
    """Isolation failure rate <= c * alpha^(d/2) for a single constant c."""
    rng = np.random.default_rng(seed)
    details = []
    ok = True
    k, eps = 5, 0.5
    for d, n in ((1, 1024), (2, 64)):
        dims = GridDims(d, n)
        for alpha in (0.1, 0.25):
            b = 4
            while b**d < k / (eps * alpha**d):
                b *= 2
            m = int(2 * k / eps)
            fails = 0
            for _ in range(specs):
                S = all_coords(dims)[rng.choice(dims.N, m, replace=False)]
                if not is_isolated(S, sample_spec(dims, rng), S[0], alpha, b):
                    fails += 1
            rate = fails / specs
            allowed = ISOLATION_C * alpha ** (d / 2)
            ok &= rate <= allowed
            details.append(f"d={d},a={alpha}: {rate:.3f}<={allowed:.3f}")
    return ok, "; ".join(details)


def check_well_hashed(seed: int = 0, specs: int = 2000) -> tuple[bool, str]:
    """Tail-noise exceedance quantile of the bucket estimator."""
    rng = np.random.default_rng(seed)
    details = []
    ok = True
    k, eps, alpha = 4, 0.5, 0.25
    for d, n in ((1, 512), (2, 64)):
        dims = GridDims(d, n)
        b = 4
        while b**d < k / (eps * alpha**d):
            b *= 2
        filt = build_tensor_filter(b, 2 * d, dims)
        m = int(2 * k / eps)
        Sf = rng.choice(dims.N, m, replace=False)
        x = np.zeros(dims.N, dtype=complex)
        x[Sf[:k]] = np.exp(2j * np.pi * rng.uniform(size=k))
        tail = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
        tail[Sf] = 0
        tail *= 0.05 / np.abs(tail).max()
        sig = Signal(dims, x + tail, "time")
        mu = noise_level(sig, k)
        S = all_coords(dims)[Sf]
        threshold = WELL_HASHED_C * math.sqrt(alpha) * eps * mu**2
        exceed = 0
        for _ in range(specs):
            if well_hashed_error(sig, S, sample_spec(dims, rng), filt, S[0]) > threshold:
                exceed += 1
        rate = exceed / specs
        allowed = alpha ** (d / 2)
        ok &= rate <= allowed
        details.append(f"d={d}: exceed {rate:.4f} <= {allowed:.3f}")
    return ok, "; ".join(details)


def check_negative_control() -> tuple[bool, str]:
    """An even-determinant matrix must be rejected by the spec constructor."""
    dims = GridDims(2, 8)
    even = np.array([[2, 4], [6, 2]])
    try:
        PermSpec(even, np.zeros(2, dtype=np.int64), np.zeros(2, dtype=np.int64), dims)
    except ValueError:
        return True, "even-determinant sigma rejected"
    return False, "even-determinant sigma was accepted"


ALL_CHECKS = (
    ("perm-identity", check_perm_identity),
    ("filter-bounds", check_filter_lemma),
    ("sigma-spreading", check_sigma_spreading),
    ("hashing-tail", check_hashing_tail),
    ("isolation", check_isolation),
    ("well-hashed", check_well_hashed),
    ("negative-control", check_negative_control),
)


def run_selftest(budget: float = 1.0, seed: int = 0) -> list[CheckResult]:
    """Run every check; budget < 1 scales down the Monte-Carlo draw counts."""
    results = []
    for name, fn in ALL_CHECKS:
        if fn in (check_sigma_spreading, check_hashing_tail, check_isolation, check_well_hashed):
            base = {"check_sigma_spreading": 10**5, "check_hashing_tail": 1000,
                    "check_isolation": 10**4, "check_well_hashed": 2000}[fn.__name__]
            count = max(200, int(base * budget))
            kwargs = {"seed": seed, ("draws" if fn is check_sigma_spreading else "specs"): count}
        elif fn is check_perm_identity:
            kwargs = {"seed": seed}
        else:
            kwargs = {}
        t0 = time.perf_counter()
        passed, detail = fn(**kwargs)
        results.append(CheckResult(name, passed, detail, time.perf_counter() - t0))
    return results
