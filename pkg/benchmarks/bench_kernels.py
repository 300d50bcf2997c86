"""Time the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from digraph_pstar import _kernels_py

try:
    from digraph_pstar import _kernels
except ImportError:  # extension not built
    _kernels = None


def workloads(mod):
    rng = np.random.default_rng(0)
    b1s = (-2.0 - rng.uniform(0.01, 8.0, 50)).tolist()
    b2s = (2.0 + rng.uniform(0.01, 8.0, 50)).tolist()
    es = rng.uniform(0.1, 0.9, 50)
    ss = (es**3 + rng.uniform(0.1, 0.9, 50) * (es - es**3)).tolist()
    es = es.tolist()
    b1c3 = mod.beta1_critical(3)
    return {
        "ell_prime x1000": lambda: [mod.ell_prime(3, -2.0, 1.5, 0.001 * k)
                                    for k in range(1, 1000)],
        "curve_solve p=2 x50": lambda: [mod.curve_solve(2, b, 1e-13) for b in b1s],
        "q_inverse_solve p=2 x50": lambda: [mod.q_inverse_solve(2, b, 1e-13) for b in b2s],
        "curve_solve p=3 x50": lambda: [mod.curve_solve(3, b1c3 + 2.0 + b, 1e-13)
                                        for b in b1s],
        "bipodal_solve p=3 x50": lambda: [mod.bipodal_solve(3, e, s, 1e-6, 50.0, 1e-13)
                                          for e, s in zip(es, ss)],
    }


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    py = workloads(_kernels_py)
    cy = workloads(_kernels) if _kernels is not None else None
    print(f"{'workload':<26}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in py.items():
        t_py = best_of(fn, args.repeat) * 1e3
        if cy is None:
            print(f"{name:<26}{t_py:>12.2f}{'n/a':>12}{'n/a':>10}")
            continue
        t_cy = best_of(cy[name], args.repeat) * 1e3
        print(f"{name:<26}{t_py:>12.2f}{t_cy:>12.2f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
