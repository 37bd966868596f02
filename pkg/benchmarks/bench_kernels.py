"""Compare the numba and numpy finite-field backends.

    python benchmarks/bench_kernels.py [--repeat N] [--primes 7 13 31 61]

Times one full point scan of the curve forms over P^3(F_p) per backend,
after a warm-up call so JIT compilation is excluded.
"""
from __future__ import annotations

import argparse
import time

from mqsurf import curves
from mqsurf.exact import smallest_cube_root_of_unity
from mqsurf.pipeline import sample_generic_forms
from mqsurf.polynomials import build_curve_forms


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--primes", type=int, nargs="+", default=[7, 13, 31, 61])
    args = ap.parse_args(argv)

    r, s, _, _ = sample_generic_forms(42)
    v2, v3 = build_curve_forms(r, s)
    print(f"{'p':>4} {'points':>8} {'numba ms':>10} {'numpy ms':>10} {'ratio':>7}")
    for p in args.primes:
        z = smallest_cube_root_of_unity(p)
        row = {}
        for backend in ("numba", "numpy"):
            run = lambda: curves.curve_points_mod_p(v2, v3, p, z, backend)  # noqa: E731
            first = run()
            row[backend] = (best_of(run, args.repeat), first)
        assert row["numba"][1] == row["numpy"][1], f"backends disagree at p={p}"
        nb, npy = row["numba"][0], row["numpy"][0]
        print(f"{p:>4} {row['numba'][1][2]:>8} {nb * 1e3:>10.2f} {npy * 1e3:>10.2f} {npy / nb:>7.1f}")


if __name__ == "__main__":
    main()
