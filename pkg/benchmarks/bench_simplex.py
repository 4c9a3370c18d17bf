"""Compare the compiled and pure-Python simplex kernels on the decision LP.

Usage: python benchmarks/bench_simplex.py [n_instances] [seed]
"""

import random
import sys
import time

from ctoconv import NumericPolicy, check_cto, _kernels
from ctoconv.synth import apply_cto
from ctoconv import testkit


def make_instances(n, seed):
    rng = random.Random(seed)
    policy = NumericPolicy()
    out = []
    for _ in range(n):
        ctx = testkit.random_context(rng.choice([3, 4, 5, 6]), rng, policy)
        source = testkit.random_cq(ctx, rng.choice([2, 3, 4]), rng)
        plan = testkit.random_cto(ctx, source.n_branches, rng.choice([2, 3, 4]), rng)
        target = apply_cto(plan, source, ctx)
        out.append((ctx, source, target))
    return out


def run(instances):
    start = time.perf_counter()
    for ctx, source, target in instances:
        assert check_cto(source, target, ctx).convertible
    return time.perf_counter() - start


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 300
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    instances = make_instances(n, seed)

    kernels = [("python", _kernels._simplex_py.run_simplex)]
    try:
        from ctoconv._kernels import _simplex_cy

        kernels.insert(0, ("cython", _simplex_cy.run_simplex))
    except ImportError:
        print("compiled kernel not available; benchmarking python only")

    times = {}
    for name, kernel in kernels:
        _kernels.run_simplex_float = kernel
        run(instances[: min(20, n)])  # warm-up
        times[name] = run(instances)
        print(f"{name:>7}: {times[name]:.3f} s for {n} decision LPs "
              f"({1e3 * times[name] / n:.2f} ms each)")
    if len(times) == 2:
        print(f"speedup: {times['python'] / times['cython']:.2f}x")


if __name__ == "__main__":
    main()
