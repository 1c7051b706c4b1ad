"""Compare the compiled and pure-Python term kernels.

Times cold computations (memo caches cleared) of tight volumes, the
n-recursion and a product of large random polynomials under each backend,
and checks that both backends give identical results.

    python3 benchmarks/bench_kernels.py [--max-complexity 6] [--repeat 3]
"""

import argparse
import random
import time

from gmpy2 import mpq

from tightwp import clear_caches
from tightwp.checks import stable_cells
from tightwp.nrecursion import tight_volume_nrec
from tightwp.ring import PI2, MPoly, b, moment, _kernels
from tightwp.volumes import tight_volume


def random_poly(rng, terms):
    syms = [b(1), b(2), b(3), PI2, moment(1), moment(2)]
    return MPoly.from_terms([({s: rng.randint(0, 4) for s in syms}, mpq(rng.randint(-99, 99), rng.randint(1, 30)))
                             for _ in range(terms)])


def workloads(max_c):
    cells = stable_cells(max_c)

    def kernel_recursion():
        return [tight_volume(g, n).poly for g, n in cells]

    def n_recursion():
        return [tight_volume_nrec(g, n).poly for g, n in cells]

    rng = random.Random(1)
    x, y = random_poly(rng, 400), random_poly(rng, 400)

    def products():
        return [x * y, (x + y) * (x - y)]

    return {"kernel recursion": kernel_recursion, "n-recursion": n_recursion,
            "polynomial products": products}


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        clear_caches()
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-complexity", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled extension not built; only the pure-Python timings are shown")
    original = _kernels.backend
    try:
        print(f"{'workload':<22}" + "".join(f"{n:>12}" for n in backends) + "   speedup  agree")
        for name, fn in workloads(args.max_complexity).items():
            times, results = {}, {}
            for be in backends:
                _kernels.use_backend(be)
                times[be], results[be] = best_time(fn, args.repeat)
            agree = all(results[be] == results[backends[0]] for be in backends)
            speedup = times["python"] / times["compiled"] if "compiled" in times else float("nan")
            print(f"{name:<22}" + "".join(f"{times[be]:>11.3f}s" for be in backends)
                  + f"   {speedup:6.2f}x  {agree}")
    finally:
        _kernels.use_backend(original)
        clear_caches()


if __name__ == "__main__":
    main()
