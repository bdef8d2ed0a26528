import numpy as np
import pytest

from sofft.dft import fft_forward
from sofft.filters import build_tensor_filter
from sofft.grid import GridDims, Signal, all_coords, flatten, unflatten
from sofft.hashing import (
    SampleOracle,
    estimate_all,
    estimate_at,
    hash_signal,
    is_isolated,
    isolation_scales,
    subtract_sparse,
    well_hashed_error,
    well_hashed_error as _whe,
)
from sofft.permute import sample_spec


def make_oracle(x: Signal) -> SampleOracle:
    return SampleOracle(fft_forward(x))


def test_oracle_counts_distinct_positions():
    dims = GridDims(1, 16)
    oracle = make_oracle(Signal(dims, np.ones(16, dtype=complex), "time"))
    assert oracle.samples_used == 0
    oracle.read(np.array([0, 3, 3, 5]))
    assert oracle.samples_used == 3
    oracle.read(np.array([3, 5]))
    assert oracle.samples_used == 3
    with pytest.raises(ValueError):
        SampleOracle(Signal(dims, np.ones(16, dtype=complex), "time"))


def test_one_sparse_estimate_is_exact():
    # a single spike is recovered exactly by any round: the bucket holds
    # G_0 * x_f = x_f after demodulation
    dims = GridDims(1, 64)
    rng = np.random.default_rng(0)
    filt = build_tensor_filter(8, 2, dims)
    for _ in range(10):
        f = int(rng.integers(dims.N))
        amp = complex(rng.normal(), rng.normal())
        x = np.zeros(dims.N, dtype=complex)
        x[f] = amp
        rnd = hash_signal(make_oracle(Signal(dims, x, "time")), filt, sample_spec(dims, rng))
        assert abs(estimate_at(rnd, unflatten(np.array([f]), dims)[0]) - amp) < 1e-9


def test_one_sparse_estimate_is_exact_d2():
    dims = GridDims(2, 16)
    rng = np.random.default_rng(1)
    filt = build_tensor_filter(4, 2, dims)
    f = 37
    x = np.zeros(dims.N, dtype=complex)
    x[f] = 2.0 - 1.0j
    rnd = hash_signal(make_oracle(Signal(dims, x, "time")), filt, sample_spec(dims, rng))
    est = estimate_all(rnd)[f]
    assert abs(est - x[f]) < 1e-9


def test_samples_accounting():
    dims = GridDims(2, 16)
    rng = np.random.default_rng(2)
    filt = build_tensor_filter(4, 2, dims)
    x = Signal(dims, rng.normal(size=dims.N) + 0j, "time")
    oracle = make_oracle(x)
    rnd = hash_signal(oracle, filt, sample_spec(dims, rng))
    # one round reads exactly the filter support, each position once
    assert rnd.samples_used == filt.support_size
    assert oracle.samples_used == filt.support_size
    assert len(set(rnd.src_flat.tolist())) == filt.support_size


def test_bucket_matches_convolution_sum_oracle():
    # direct O(N k) check: bucket estimate of i equals
    # sum_f x_f G_{pi(f) - pi(i)} exp(...) for a sparse x; the closed-form
    # time filter and offset arithmetic provide an independent route
    from sofft.permute import offset

    dims = GridDims(1, 256)
    rng = np.random.default_rng(3)
    filt = build_tensor_filter(16, 2, dims)
    support = rng.choice(dims.N, size=6, replace=False)
    x = np.zeros(dims.N, dtype=complex)
    x[support] = rng.normal(size=6) + 1j * rng.normal(size=6)
    spec = sample_spec(dims, rng)
    rnd = hash_signal(make_oracle(Signal(dims, x, "time")), filt, spec)
    coords = all_coords(dims)
    for i_flat in rng.choice(dims.N, size=8, replace=False):
        i = coords[i_flat]
        expected = 0.0 + 0.0j
        for f_flat in support:
            f = coords[f_flat]
            o = offset(spec, i, f)
            expo = (int(o @ (spec.sigma @ spec.q)) - int(i @ (spec.sigma.T @ spec.a))) % dims.n
            phase = np.exp(2j * np.pi / dims.n * expo)
            # total phase: filter modulation at pi(f) demodulated at i
            expo_f = (int(f @ (spec.sigma.T @ spec.a)) - int(i @ (spec.sigma.T @ spec.a))) % dims.n
            expected += x[f_flat] * filt.time_value(o[None, :])[0] * np.exp(
                2j * np.pi / dims.n * expo_f
            )
        got = estimate_at(rnd, i)
        assert abs(got - expected) < 1e-9 * (1 + abs(expected))


def test_subtract_sparse_zero_and_exact():
    dims = GridDims(1, 128)
    rng = np.random.default_rng(4)
    filt = build_tensor_filter(8, 2, dims)
    support = rng.choice(dims.N, size=5, replace=False)
    x = np.zeros(dims.N, dtype=complex)
    x[support] = rng.normal(size=5) + 1j * rng.normal(size=5)
    oracle = make_oracle(Signal(dims, x, "time"))
    rnd = hash_signal(oracle, filt, sample_spec(dims, rng))
    used = oracle.samples_used

    # empty estimate: unchanged buckets
    assert np.allclose(subtract_sparse(rnd, {}, filt), rnd.u)
    # full estimate: buckets vanish
    chi = {int(f): complex(x[f]) for f in support}
    assert np.abs(subtract_sparse(rnd, chi, filt)).max() < 1e-9
    # no new samples were consumed by subtraction
    assert oracle.samples_used == used


def test_subtract_sparse_matches_fresh_oracle_on_residual():
    dims = GridDims(1, 128)
    rng = np.random.default_rng(5)
    filt = build_tensor_filter(8, 2, dims)
    support = rng.choice(dims.N, size=6, replace=False)
    x = np.zeros(dims.N, dtype=complex)
    x[support] = rng.normal(size=6) + 1j * rng.normal(size=6)
    spec = sample_spec(dims, rng)
    rnd = hash_signal(make_oracle(Signal(dims, x, "time")), filt, spec)

    chi = {int(f): complex(x[f]) for f in support[:3]}
    residual = x.copy()
    for f, v in chi.items():
        residual[f] -= v
    rnd_res = hash_signal(make_oracle(Signal(dims, residual, "time")), filt, spec)
    assert np.abs(subtract_sparse(rnd, chi, filt) - rnd_res.u).max() < 1e-9


def test_isolation_trivial_cases():
    dims = GridDims(1, 1024)
    rng = np.random.default_rng(6)
    spec = sample_spec(dims, rng)
    coords = all_coords(dims)
    i = coords[17]
    # alone in S: always isolated
    assert is_isolated(i[None, :], spec, i, alpha=0.25, b=16)
    # everything in S: far too crowded at the smallest scale
    assert not is_isolated(coords, spec, i, alpha=0.25, b=16)


def test_isolation_scales_bounded():
    dims = GridDims(1, 1024)
    scales = list(isolation_scales(dims, 16))
    assert scales == list(range(len(scales)))
    assert all((dims.n // 16) * 2 ** (t + 2) < dims.n / 2 for t in scales)
    assert list(isolation_scales(GridDims(1, 16), 4)) == []


def test_well_hashed_error_zero_on_covered_support():
    # if x is supported inside S the tail is zero and so is the error
    dims = GridDims(1, 128)
    rng = np.random.default_rng(7)
    filt = build_tensor_filter(8, 2, dims)
    support = rng.choice(dims.N, size=4, replace=False)
    x = np.zeros(dims.N, dtype=complex)
    x[support] = 1.0
    coords = all_coords(dims)
    S = coords[support]
    spec = sample_spec(dims, rng)
    err = well_hashed_error(Signal(dims, x, "time"), S, spec, filt, coords[support[0]])
    assert err < 1e-18


@pytest.mark.parametrize("d,n,b", [(1, 256, 16), (2, 16, 4)])
def test_mean_squared_estimate_error_bounded(d, n, b):
    # averaged over specs, the squared bucket error at a fixed i is at most
    # C^d ||x||^2 / B with B = b^d buckets (C frozen by calibration)
    dims = GridDims(d, n)
    rng = np.random.default_rng(8)
    filt = build_tensor_filter(b, 2 * d, dims)
    x = rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N)
    x[5] = 0.0
    sig = Signal(dims, x, "time")
    i = all_coords(dims)[5]
    S = i[None, :]
    errs = []
    for _ in range(400):
        spec = sample_spec(dims, rng)
        errs.append(well_hashed_error(sig, S, spec, filt, i))
    bound = 1.0**d * np.linalg.norm(x) ** 2 / b**d
    assert np.mean(errs) <= bound
