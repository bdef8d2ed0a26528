"""Sample-efficient sparse Fourier recovery in any constant dimension."""

from .grid import GridDims, Signal, err_k, noise_level
from .dft import dft_bruteforce, fft_forward, fft_inverse
from .permute import PermSpec, sample_spec
from .filters import Filter, build_tensor_filter, check_filter_bounds
from .hashing import SampleOracle, hash_signal
from .recovery import RecoveryParams, locate_and_estimate, median_complex, sparse_fft

__version__ = "0.1.0"

__all__ = [
    "GridDims",
    "Signal",
    "err_k",
    "noise_level",
    "dft_bruteforce",
    "fft_forward",
    "fft_inverse",
    "PermSpec",
    "sample_spec",
    "Filter",
    "build_tensor_filter",
    "check_filter_bounds",
    "SampleOracle",
    "hash_signal",
    "RecoveryParams",
    "locate_and_estimate",
    "median_complex",
    "sparse_fft",
]
