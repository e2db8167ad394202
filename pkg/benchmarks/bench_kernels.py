"""Time the schema-validity kernel on each backend.

    python3 benchmarks/bench_kernels.py [--max-worlds 4] [--repeat 3]

Runs every catalog principle against every enumerated structure and checks
that all backends agree before reporting timings.
"""

import argparse
import time

import numpy as np

from minparadox import catalog
from minparadox._kernels import available_backends
from minparadox.kripke import schema_countermodel
from minparadox.search import enumerate_structures


def sweep(structures, schemas, backend):
    return np.array(
        [[schema_countermodel(s, p, backend=backend) is None for p in schemas] for s in structures],
        dtype=bool,
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-worlds", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--python", action="store_true", help="also time the interpreted loop")
    args = ap.parse_args()

    structures = list(enumerate_structures(args.max_worlds))
    schemas = [p.schema for p in catalog.principles()]
    backends = available_backends() + (["python"] if args.python else [])
    print(f"{len(structures)} structures x {len(schemas)} principles")

    reference = None
    for b in backends:
        sweep(structures[:2], schemas, b)  # warm-up, triggers JIT compilation
        times = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            got = sweep(structures, schemas, b)
            times.append(time.perf_counter() - t0)
        if reference is None:
            reference = got
        elif not np.array_equal(reference, got):
            raise SystemExit(f"backend {b} disagrees with {backends[0]}")
        print(f"{b:>7}: best {min(times):.3f}s  median {sorted(times)[len(times) // 2]:.3f}s")


if __name__ == "__main__":
    main()
