"""Support-recovery benchmark harness.

Sweeps a (k, r_max) grid of exactly sparse signals, runs the recovery
loop behind a counting oracle, and declares a trial successful when the
thresholded output support equals the true support exactly.  Results go
to CSV (one row per grid cell) and optionally to a heatmap figure.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .dft import fft_forward
from .grid import GridDims, Signal
from .hashing import SampleOracle
from .recovery import RecoveryParams, sparse_fft

CSV_HEADER = "method,k,r_max,samples,trials,successes,success_rate"
SUPPORT_THRESHOLD = 0.5
METHOD_NAME = "sofft"


@dataclass(frozen=True)
class ExperimentConfig:
    dims: GridDims
    k_list: tuple = tuple(range(10, 101, 10))
    r_max_list: tuple = tuple(range(5, 26))
    trials: int = 50
    model: str = "pm-one"  # or 'unit-circle'
    ratio: float = 1.2
    seed: int = 0
    nu_floor: float = 0.2
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.k_list or not self.r_max_list:
            raise ValueError("k_list and r_max_list must be nonempty")
        if self.model not in ("pm-one", "unit-circle"):
            raise ValueError(f"unknown amplitude model {self.model!r}")


@dataclass(frozen=True)
class ExperimentRecord:
    method: str
    k: int
    r_max: int
    samples: int
    trials: int
    successes: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


def gen_sparse_signal(
    dims: GridDims, k: int, model: str, rng: np.random.Generator
) -> tuple[Signal, np.ndarray]:
    """Exactly k-sparse signal with uniform support and unit-magnitude values."""
    if not 0 <= k <= dims.N:
        raise ValueError(f"k must lie in [0, {dims.N}], got {k}")
    support = np.sort(rng.choice(dims.N, size=k, replace=False))
    values = np.zeros(dims.N, dtype=complex)
    if model == "pm-one":
        values[support] = rng.choice([-1.0, 1.0], size=k)
    elif model == "unit-circle":
        values[support] = np.exp(2j * np.pi * rng.uniform(size=k))
    else:
        raise ValueError(f"unknown amplitude model {model!r}")
    return Signal(dims, values, "time"), support


def trial_rng(seed: int, k: int, r_max: int, trial: int) -> np.random.Generator:
    """Independent, reproducible RNG stream for one trial of one cell."""
    return np.random.default_rng(np.random.SeedSequence([seed, k, r_max, trial]))


def run_trial(
    dims: GridDims,
    k: int,
    r_max: int,
    model: str,
    ratio: float,
    nu_floor: float,
    seed: int,
    trial: int,
) -> tuple[bool, int]:
    """One seeded support-recovery trial; returns (success, samples used)."""
    rng = trial_rng(seed, k, r_max, trial)
    x, support = gen_sparse_signal(dims, k, model, rng)
    oracle = SampleOracle(fft_forward(x))
    params = RecoveryParams.experiment(
        dims, k, r_max=r_max, ratio=ratio, nu_floor=nu_floor
    )
    info: dict = {}
    chi = sparse_fft(oracle, params, rng, info)
    recovered = {f for f, v in chi.items() if abs(v) >= SUPPORT_THRESHOLD}
    return recovered == set(support.tolist()), info["samples_used"]


def _run_cell(args) -> ExperimentRecord:
    config, k, r_max = args
    successes = 0
    samples = 0
    for trial in range(config.trials):
        ok, samples = run_trial(
            config.dims, k, r_max, config.model, config.ratio,
            config.nu_floor, config.seed, trial,
        )
        successes += ok
    return ExperimentRecord(METHOD_NAME, k, r_max, samples, config.trials, successes)


def run_sweep(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Full k x r_max sweep; cells are independent and order-stable."""
    cells = [(config, k, r) for k in config.k_list for r in config.r_max_list]
    if config.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(config.threads) as pool:
            records = list(pool.map(_run_cell, cells))
    else:
        records = [_run_cell(c) for c in cells]
    records.sort(key=lambda rec: (rec.k, rec.r_max))
    return records


def format_float(x: float) -> str:
    return f"{x:.6g}"


def write_csv(records: list[ExperimentRecord], destination) -> None:
    """Write records as CSV, bit-stable: sorted rows, LF endings, 6 sig digits."""
    rows = sorted(records, key=lambda rec: (rec.k, rec.r_max))
    lines = [CSV_HEADER]
    for rec in rows:
        lines.append(
            f"{rec.method},{rec.k},{rec.r_max},{rec.samples},"
            f"{rec.trials},{rec.successes},{format_float(rec.success_rate)}"
        )
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path) -> list[ExperimentRecord]:
    """Read back a CSV written by write_csv."""
    records = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            method, k, r_max, samples, trials, successes, _rate = line.strip().split(",")
            records.append(
                ExperimentRecord(
                    method, int(k), int(r_max), int(samples), int(trials), int(successes)
                )
            )
    return records


def render_heatmap(records: list[ExperimentRecord], destination) -> None:
    """Render the success-rate grid as a heatmap figure (one rect per cell).

    Output format follows the destination suffix (SVG by default).
    Grayscale-safe: cell shade encodes success rate directly.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    ks = sorted({rec.k for rec in records})
    rs = sorted({rec.r_max for rec in records})
    fig, ax = plt.subplots(figsize=(6, 5))
    for rec in records:
        shade = 1.0 - rec.success_rate  # white = always fails, black = always succeeds
        ax.add_patch(
            Rectangle(
                (rs.index(rec.r_max), ks.index(rec.k)), 1, 1,
                facecolor=(shade, shade, shade), edgecolor="none",
            )
        )
    ax.set_xlim(0, len(rs))
    ax.set_ylim(0, len(ks))
    ax.set_xticks(np.arange(len(rs)) + 0.5, [str(r) for r in rs], fontsize=8)
    ax.set_yticks(np.arange(len(ks)) + 0.5, [str(k) for k in ks], fontsize=8)
    ax.set_xlabel("r_max")
    ax.set_ylabel("k")
    ax.set_title("support recovery success rate (dark = 1)")
    fig.tight_layout()
    fig.savefig(destination)
    plt.close(fig)
