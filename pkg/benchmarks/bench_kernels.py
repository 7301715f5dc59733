"""Time the compiled and pure-Python path kernels on the two-phase Coxian example.

    python benchmarks/bench_kernels.py [--paths N] [--u U] [--repeat R]

Both kernels consume the same random stream, so the script also checks that
their outputs are identical.
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

import numpy as np

from gsruin.simulate import SimConfig, available_kernels, run_paths, suggest_level_cap
from gsruin.specfile import load_model

MODEL = Path(__file__).resolve().parent.parent / "models" / "coxian_two_phase.ini"


def time_kernel(model, u, cap, kernel, paths, repeat):
    cfg = SimConfig(n_paths=paths, seed=1, kernel=kernel, block_size=min(paths, 10_000))
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run_paths(model, u, cfg, level_cap=cap)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=20_000)
    ap.add_argument("--u", type=float, default=2.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    model = load_model(MODEL)
    cap = suggest_level_cap(model, args.u)
    results = {}
    for kernel in available_kernels():
        # the Python kernel is slow; time it on fewer paths and scale
        paths = args.paths if kernel == "c" else max(1, args.paths // 10)
        t, out = time_kernel(model, args.u, cap, kernel, paths, args.repeat)
        results[kernel] = (t, paths, out)
        print(f"{kernel:>6}: {paths:>8d} paths in {t:8.4f} s  ({t / paths * 1e6:8.2f} us/path)")
    if "c" in results:
        tc, nc, _ = results["c"]
        tp, np_, _ = results["python"]
        print(f"speedup: {(tp / np_) / (tc / nc):.1f}x")
        small = max(1, min(nc, np_))
        cfg = SimConfig(n_paths=small, seed=1, block_size=min(small, 10_000))
        a = run_paths(model, args.u, SimConfig(**{**cfg.__dict__, "kernel": "c"}), level_cap=cap)
        b = run_paths(model, args.u, SimConfig(**{**cfg.__dict__, "kernel": "python"}), level_cap=cap)
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"identical outputs on {small} paths: {same}")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
