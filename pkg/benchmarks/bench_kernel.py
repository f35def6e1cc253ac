"""Time the compiled and pure-Python quadrature cores on the same workload.

Usage::

    python benchmarks/bench_kernel.py [--points 200] [--repeat 3]

For each reference model a fixed set of interior ``(x, t)`` points is
evaluated with both backends. The script reports the best wall time of
``--repeat`` runs, the speedup and the largest difference between the two
backends' values, scaled by the largest ``|K|`` in the workload.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fracwave import kernel_point, reference_models, slowness
from fracwave._backend import get_backend


def workload(model, n, seed=0):
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.5, 5.0, n)
    k = slowness(model)
    reach = 0.9 * t / k if k > 0.0 else 2.0 * t
    return list(zip(rng.uniform(-1.0, 1.0, n) * reach, t))


def run(model, points, backend):
    return np.array([kernel_point(model, x, t, backend=backend).value for x, t in points])


def best_time(model, points, backend, repeat):
    best, values = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        values = run(model, points, backend)
        best = min(best, time.perf_counter() - start)
    return best, values


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    compiled, python = get_backend("compiled"), get_backend("python")
    header = f"{'model':<18}{'compiled [s]':>14}{'python [s]':>12}{'speedup':>9}{'max diff':>14}"
    print(header)
    print("-" * len(header))
    for name, model in reference_models().items():
        points = workload(model, args.points)
        tc, vc = best_time(model, points, compiled, args.repeat)
        tp, vp = best_time(model, points, python, args.repeat)
        diff = float(np.max(np.abs(vc - vp)) / np.max(np.abs(vp)))
        print(f"{name:<18}{tc:>14.3f}{tp:>12.3f}{tp / tc:>9.1f}{diff:>14.1e}")


if __name__ == "__main__":
    main()
