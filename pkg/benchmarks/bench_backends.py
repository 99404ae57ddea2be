"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_backends.py [--sizes 64 128 256] [--repeat 3]

Two hot loops are timed: the dense Jacobi eigensolver (on assembled
finite-difference operators, which is where it is used) and the interval
cover scan behind the Carriere coverage report.  The first numba call per
signature includes compilation, so it is run once before timing.
"""
import argparse
import time

import numpy as np

from adiabatic import carriere, kernels
from adiabatic._backend import HAVE_NUMBA
from adiabatic.grid_fd import GridSpec, assemble
from adiabatic.torus import FlowSpec


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_jacobi(sizes, repeat, backends):
    flow = FlowSpec.rational(3, 4)
    print(f"{'matrix':>8} {'backend':>8} {'seconds':>10} {'max|w - eigh|':>14}")
    for N in sizes:
        mat = assemble(GridSpec(N, flow, 0.25)).matrix
        ref = np.linalg.eigh(mat)[0]
        for name in backends:
            kernels.jacobi_eigh(mat[:4, :4], backend=name)  # warm-up / compile
            secs, w = best_of(lambda: kernels.jacobi_eigh(mat, backend=name), repeat)
            print(f"{mat.shape[0]:>8} {name:>8} {secs:>10.3f} {np.max(np.abs(w - ref)):>14.2e}")


def bench_cover(bounds, repeat, backends):
    mus = carriere.mu_grid(-50.0, 50.0, 0.01)
    print(f"{'bound':>8} {'backend':>8} {'seconds':>10} {'coverage':>10}")
    for bound in bounds:
        lo, hi = carriere.interval_table(bound)
        for name in backends:
            kernels.interval_cover(mus[:4], lo[:4], hi[:4], backend=name)
            secs, cov = best_of(lambda: kernels.interval_cover(mus, lo, hi, backend=name), repeat)
            print(f"{bound:>8} {name:>8} {secs:>10.3f} {cov.mean():>10.6f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16], help="FD grid sizes N (matrix is 2N^2)")
    ap.add_argument("--bounds", type=int, nargs="+", default=[50, 200])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print("Jacobi eigensolver")
    bench_jacobi(args.sizes, args.repeat, backends)
    print()
    print("Interval cover")
    bench_cover(args.bounds, args.repeat, backends)


if __name__ == "__main__":
    main()
