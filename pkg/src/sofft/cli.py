"""Command-line surface: gen / recover / experiment / selftest.

Every run is fully determined by its argument vector (the SOFFT_SEED
environment variable, when set, overrides --seed).  Exit codes: 0 success,
1 check failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bench, sigio
from .dft import fft_forward
from .grid import GridDims, Signal
from .hashing import SampleOracle
from .recovery import RecoveryParams, sparse_fft

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _dims_arg(parser):
    parser.add_argument(
        "--dims", nargs=2, type=int, metavar=("D", "N_SIDE"), default=[1, 4096],
        help="dimension count and power-of-two side length",
    )


def _effective_seed(args) -> int:
    env = os.environ.get("SOFFT_SEED")
    if env is not None:
        return int(env)
    return args.seed


def cmd_gen(args) -> int:
    dims = GridDims(args.dims[0], args.dims[1])
    rng = np.random.default_rng(np.random.SeedSequence([_effective_seed(args)]))
    signal, support = bench.gen_sparse_signal(dims, args.k, args.model, rng)
    if args.json:
        sigio.write_signal_json(args.out, signal)
    else:
        sigio.write_signal(args.out, signal)
    sigio.write_support(args.out + ".support", support)
    print(f"wrote {args.out} (d={dims.d}, n={dims.n}, k={args.k}, model={args.model})")
    return EXIT_OK


def cmd_recover(args) -> int:
    if args.json:
        signal = sigio.read_signal_json(args.input, domain="time")
    else:
        signal = sigio.read_signal(args.input, domain="time")
    dims = signal.dims
    rng = np.random.default_rng(np.random.SeedSequence([_effective_seed(args)]))
    oracle = SampleOracle(fft_forward(signal))
    if args.k == 0:
        chi: dict = {}
        info = {"samples_used": 0, "iterations": 0}
    else:
        params = RecoveryParams.experiment(
            dims, args.k, r_max=args.r_max, ratio=args.ratio, nu_floor=args.floor
        )
        info = {}
        chi = sparse_fft(oracle, params, rng, info)
    sigio.write_estimate(args.out, chi)

    residual = signal.values.copy()
    for f, v in chi.items():
        residual[f] -= v
    print(f"samples_used: {info['samples_used']}")
    print(f"iterations: {info['iterations']}")
    print(f"residual_l2: {np.linalg.norm(residual):.6g}")
    print(f"residual_linf: {np.abs(residual).max():.6g}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.paper:
        dims = GridDims(1, 2**15)
    else:
        dims = GridDims(args.dims[0], args.dims[1])
    config = bench.ExperimentConfig(
        dims=dims,
        k_list=tuple(args.k_list),
        r_max_list=tuple(args.r_max_list),
        trials=args.trials,
        model=args.model,
        ratio=args.ratio,
        seed=_effective_seed(args),
        threads=args.threads,
    )
    records = bench.run_sweep(config)
    bench.write_csv(records, args.out)
    print(f"wrote {args.out} ({len(records)} cells)")
    if args.heatmap:
        bench.render_heatmap(records, args.heatmap)
        print(f"wrote {args.heatmap}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(budget=args.budget, seed=_effective_seed(args))
    failed = False
    for res in results:
        status = "ok" if res.passed else "FAIL"
        print(f"[{status}] {res.name} ({res.seconds:.1f}s): {res.detail}")
        failed |= not res.passed
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sofft", description="sparse Fourier recovery toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an exactly sparse test signal")
    _dims_arg(p)
    p.add_argument("--k", type=int, required=True, help="sparsity")
    p.add_argument("--model", choices=["pm-one", "unit-circle"], default="pm-one")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true", help="JSON signal format (N <= 4096)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("recover", help="run sparse recovery on a signal file")
    p.add_argument("input", help="signal file from `gen`")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r-max", type=int, default=18)
    p.add_argument("--ratio", type=float, default=1.2)
    p.add_argument("--floor", type=float, default=0.2, help="threshold floor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("experiment", help="phase-transition sweep")
    _dims_arg(p)
    p.add_argument("--k-list", nargs="+", type=int, default=list(range(10, 101, 10)))
    p.add_argument("--r-max-list", nargs="+", type=int, default=list(range(5, 26)))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--model", choices=["pm-one", "unit-circle"], default="pm-one")
    p.add_argument("--ratio", type=float, default=1.2)
    p.add_argument("--paper", action="store_true", help="full-size grid (n = 2^15)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV destination")
    p.add_argument("--heatmap", help="optional heatmap figure destination (SVG/PNG)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("selftest", help="run the structural verification suite")
    p.add_argument("--budget", type=float, default=1.0,
                   help="Monte-Carlo budget factor (< 1 for a quick pass)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
