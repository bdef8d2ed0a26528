"""Signal and estimate file formats used by the CLI.

Binary signal format (little-endian): magic 'SOFT1', u32 d, u32 n, u64 N,
then N interleaved float64 (re, im) pairs in flat order.  A JSON variant
exists for small signals.  Sparse estimates are plain 'index,re,im' text.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .grid import GridDims, Signal

MAGIC = b"SOFT1"
_HEADER = struct.Struct("<5sIIQ")
JSON_MAX_N = 4096


def write_signal(path, signal: Signal) -> None:
    dims = signal.dims
    payload = np.empty((dims.N, 2), dtype="<f8")
    payload[:, 0] = signal.values.real
    payload[:, 1] = signal.values.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, dims.d, dims.n, dims.N))
        fh.write(payload.tobytes())


def read_signal(path, domain: str = "time") -> Signal:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise ValueError(f"truncated signal file: {path}")
        magic, d, n, N = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ValueError(f"bad magic in signal file: {path}")
        dims = GridDims(d, n)
        if N != dims.N:
            raise ValueError(f"inconsistent header in signal file: {path}")
        payload = np.frombuffer(fh.read(16 * N), dtype="<f8")
    if payload.size != 2 * N:
        raise ValueError(f"truncated signal file: {path}")
    payload = payload.reshape(N, 2)
    return Signal(dims, payload[:, 0] + 1j * payload[:, 1], domain)


def write_signal_json(path, signal: Signal) -> None:
    if signal.dims.N > JSON_MAX_N:
        raise ValueError(f"JSON signal files limited to N <= {JSON_MAX_N}")
    doc = {
        "d": signal.dims.d,
        "n": signal.dims.n,
        "re": signal.values.real.tolist(),
        "im": signal.values.imag.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def read_signal_json(path, domain: str = "time") -> Signal:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    dims = GridDims(doc["d"], doc["n"])
    values = np.asarray(doc["re"]) + 1j * np.asarray(doc["im"])
    return Signal(dims, values, domain)


def write_support(path, support) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([int(i) for i in support], fh)
        fh.write("\n")


def read_support(path) -> list[int]:
    with open(path, encoding="utf-8") as fh:
        return [int(i) for i in json.load(fh)]


def write_estimate(path, chi: dict) -> None:
    """Write a sparse estimate as 'index,re,im' lines sorted by index."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("index,re,im\n")
        for f in sorted(chi):
            v = chi[f]
            fh.write(f"{f},{v.real:.17g},{v.imag:.17g}\n")


def read_estimate(path) -> dict:
    chi = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "index,re,im":
            raise ValueError(f"unexpected estimate header in {path}: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            f, re, im = line.strip().split(",")
            chi[int(f)] = float(re) + 1j * float(im)
    return chi
