"""Compare the compiled and pure-Python integer kernels, and time a full geography.

Run: python benchmarks/bench_kernel.py
"""

from __future__ import annotations

import random
import time

from geolog.exactgeom import _kernel_py as py
from geolog.exactgeom import _kernel_select as sel
from geolog.exactgeom.cone import cone_from_facets


def _timeit(fn, reps: int) -> float:
    t = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t) / reps


def random_matrices(rng: random.Random, count: int, n: int) -> list[list[list[int]]]:
    return [[[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)] for _ in range(count)]


def bench_bareiss(rng: random.Random) -> None:
    mats = random_matrices(rng, 200, 6)
    for impl, name in ((py, "python"), (getattr(sel, "_compiled", None), "compiled")):
        if impl is None:
            print(f"bareiss_rank  {name:9s} not built")
            continue
        t = _timeit(lambda impl=impl: [impl.bareiss_rank(m) for m in mats], 5)
        print(f"bareiss_rank  {name:9s} {t * 1e3:8.2f} ms / 200 matrices")
    assert all(py.bareiss_det(m) == sel.bareiss_det(m) for m in mats)


def bench_cones(rng: random.Random) -> None:
    # random pointed cones in Z^4 given by facets
    cones = []
    for _ in range(30):
        facets = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(9)] + [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        cones.append(facets)
    t = _timeit(lambda: [cone_from_facets(f, (), 4) for f in cones], 2)
    print(f"cone V-rep    {sel.BACKEND:9s} {t * 1e3:8.2f} ms / 30 cones")


def bench_geography() -> None:
    from geolog.fixtures import fiber_modification_2c_pair
    from geolog.geography import geography_of

    X, cube = fiber_modification_2c_pair()
    t = time.perf_counter()
    g = geography_of(X, cube)
    print(f"geography     {sel.BACKEND:9s} {time.perf_counter() - t:8.2f} s  ({len(g.classes)} classes, 3D cube)")


if __name__ == "__main__":
    rng = random.Random(0)
    bench_bareiss(rng)
    bench_cones(rng)
    bench_geography()
