"""Time the numba and numpy Jacobi kernels on random hermitian matrices.

    python3 benchmarks/bench_jacobi.py [--sizes 4 8 16 32 64] [--repeat 5]
"""
import argparse
import time

import numpy as np

from spinspec import _kernels


def run(kernel, m):
    a = np.ascontiguousarray(m.copy())
    v = np.eye(m.shape[0], dtype=np.complex128)
    tol = 1e-13 * np.linalg.norm(a)
    t0 = time.perf_counter()
    sweeps, off = kernel(a, v, tol, 100)
    return time.perf_counter() - t0, sweeps, np.sort(np.diag(a).real)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    run(_kernels.jacobi_numba, np.eye(2, dtype=np.complex128))  # compile once
    print(f"{'n':>4} {'sweeps':>6} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8} {'max |dlambda|':>14}")
    for n in args.sizes:
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = x + x.conj().T
        fast = [run(_kernels.jacobi_numba, m) for _ in range(args.repeat)]
        slow = [run(_kernels.jacobi_numpy, m) for _ in range(args.repeat)]
        tf = min(r[0] for r in fast)
        ts = min(r[0] for r in slow)
        diff = float(np.max(np.abs(fast[0][2] - slow[0][2])))
        print(f"{n:>4} {fast[0][1]:>6} {1e3 * tf:>10.3f} {1e3 * ts:>10.3f} {ts / tf:>8.1f} {diff:>14.2e}")


if __name__ == "__main__":
    main()
