#!/usr/bin/env python3
"""Benchmark the compiled iteration kernel against the numpy fallback.

Times full alternating-descent blocks on the reference 100x100 rank-5
instance (and a couple of other shapes), with and without the per-step norm
tracking the descent/budget monitors need.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeats K]
"""

from __future__ import annotations

import argparse
import time

from altgd import InitConfig, Rng, SpectrumSpec, init_unbalanced, make_matrix
from altgd._kernel import available_backends, get_backend


def bench_case(m: int, n: int, r: int, d: int, eta: float, steps: int,
               need_norms: bool, repeats: int) -> dict[str, float]:
    spec = SpectrumSpec.linspace(m, n, 1.0, 0.5, r)
    a = make_matrix(Rng(777, 2**63), spec)
    cfg = InitConfig(c=4.0, nu=1e-10, eta=eta, d=d)
    x0, y0 = init_unbalanced(Rng(777, 0), a, cfg)
    timings: dict[str, float] = {}
    for name in available_backends():
        backend = get_backend(name)
        best = float("inf")
        for _ in range(repeats):
            x, y = x0.copy(), y0.copy()
            start = time.perf_counter()
            res = backend.run_block(x, y, a, eta, steps, -1.0, need_norms)
            elapsed = time.perf_counter() - start
            assert res.steps == steps
            best = min(best, elapsed)
        timings[name] = best
    return timings


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if len(backends) < 2:
        print("note: compiled backend not built; timing numpy only")

    cases = [
        ("fig1 instance", 100, 100, 5, 6, 3.9e-6),
        ("wide", 200, 50, 5, 8, 1e-6),
        ("small", 30, 30, 3, 4, 1e-4),
    ]
    header = f"{'case':<16}{'norms':<8}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, m, n, r, d, eta in cases:
        for need_norms in (False, True):
            timings = bench_case(m, n, r, d, eta, args.steps, need_norms, args.repeats)
            per_iter = {b: timings[b] / args.steps * 1e6 for b in backends}
            line = f"{label:<16}{str(need_norms):<8}"
            line += "".join(f"{per_iter[b]:>10.2f}us" for b in backends)
            if len(backends) == 2:
                line += f"{timings['numpy'] / timings['cython']:>9.2f}x"
            print(line)

    # Cross-check: both backends produce the same trajectory.
    if len(backends) == 2:
        spec = SpectrumSpec.linspace(100, 100, 1.0, 0.5, 5)
        a = make_matrix(Rng(777, 2**63), spec)
        cfg = InitConfig(c=4.0, nu=1e-10, eta=3.9e-6, d=6)
        x0, y0 = init_unbalanced(Rng(777, 0), a, cfg)
        finals = {}
        for name in backends:
            x, y = x0.copy(), y0.copy()
            res = get_backend(name).run_block(x, y, a, 3.9e-6, args.steps, -1.0, False)
            finals[name] = res.f[-1]
        rel = abs(finals["cython"] - finals["numpy"]) / finals["numpy"]
        print(f"\nfinal-loss agreement after {args.steps} steps: "
              f"relative difference {rel:.2e}")


if __name__ == "__main__":
    main()
