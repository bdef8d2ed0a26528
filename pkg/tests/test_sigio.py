import numpy as np
import pytest

from sofft import sigio
from sofft.grid import GridDims, Signal


def random_signal(dims, seed=0):
    rng = np.random.default_rng(seed)
    return Signal(dims, rng.normal(size=dims.N) + 1j * rng.normal(size=dims.N), "time")


@pytest.mark.parametrize("d,n", [(1, 64), (2, 16), (3, 4)])
def test_binary_roundtrip(d, n, tmp_path):
    dims = GridDims(d, n)
    x = random_signal(dims)
    path = tmp_path / "sig.bin"
    sigio.write_signal(path, x)
    back = sigio.read_signal(path)
    assert back.dims == dims and back.domain == "time"
    assert np.array_equal(back.values, x.values)


def test_binary_header_layout(tmp_path):
    dims = GridDims(2, 16)
    path = tmp_path / "sig.bin"
    sigio.write_signal(path, random_signal(dims))
    raw = path.read_bytes()
    assert raw[:5] == b"SOFT1"
    assert len(raw) == 21 + 16 * dims.N
    assert int.from_bytes(raw[5:9], "little") == 2
    assert int.from_bytes(raw[9:13], "little") == 16
    assert int.from_bytes(raw[13:21], "little") == 256


def test_binary_error_cases(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"XXXX")
    with pytest.raises(ValueError):
        sigio.read_signal(path)
    dims = GridDims(1, 64)
    good = tmp_path / "good.bin"
    sigio.write_signal(good, random_signal(dims))
    truncated = tmp_path / "trunc.bin"
    truncated.write_bytes(good.read_bytes()[:-8])
    with pytest.raises(ValueError):
        sigio.read_signal(truncated)
    with pytest.raises(OSError):
        sigio.read_signal(tmp_path / "missing.bin")


def test_json_roundtrip_and_cap(tmp_path):
    dims = GridDims(1, 64)
    x = random_signal(dims)
    path = tmp_path / "sig.json"
    sigio.write_signal_json(path, x)
    back = sigio.read_signal_json(path)
    assert np.allclose(back.values, x.values)
    big = Signal(GridDims(1, 2**13), np.zeros(2**13, dtype=complex), "time")
    with pytest.raises(ValueError):
        sigio.write_signal_json(tmp_path / "big.json", big)


def test_support_roundtrip(tmp_path):
    path = tmp_path / "s.support"
    sigio.write_support(path, np.array([3, 7, 11]))
    assert sigio.read_support(path) == [3, 7, 11]


def test_estimate_roundtrip(tmp_path):
    chi = {5: 1.25 - 0.5j, 2: -3.0 + 0j}
    path = tmp_path / "est.csv"
    sigio.write_estimate(path, chi)
    lines = path.read_text().splitlines()
    assert lines[0] == "index,re,im"
    assert lines[1].startswith("2,")  # sorted by index
    back = sigio.read_estimate(path)
    assert back == chi
    with pytest.raises(ValueError):
        bad = tmp_path / "bad.csv"
        bad.write_text("wrong\n")
        sigio.read_estimate(bad)
