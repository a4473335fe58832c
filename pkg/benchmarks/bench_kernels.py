"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import random
import time
from pathlib import Path

import memsmic
from memsmic import kernels, statics
from memsmic.design import table1_design
from memsmic.search import grid_search, load_constraints, load_space

DATA = Path(memsmic.__file__).parent / "data"


def _cases(n=200, seed=1):
    rng = random.Random(seed)
    return [(rng.uniform(5e3, 200e3), rng.uniform(0.05, 3.0)) for _ in range(n)]


def bench_cutoff():
    for f0, zeta in _cases():
        kernels.cutoff_search(f0, zeta, 10.0, 10 * f0, 200, 3.0, False, 1e-9)


def bench_equilibrium():
    sm = statics.mechanical_sensitivity(table1_design().diaphragm)
    for v in range(0, 44):
        for p in (0.0, 10.0, 50.0):
            kernels.equilibrium_deflection(sm, 10e-6, 8.854e-12, float(v), p, 1e-10)


def bench_pull_in():
    rng = random.Random(2)
    for _ in range(2000):
        kernels.pull_in_search(rng.uniform(1e-9, 1e-7), rng.uniform(2e-6, 20e-6), 8.854e-12, 1e-10)


def bench_grid_search():
    grid_search(load_space(DATA / "space_table1.json"), load_constraints(DATA / "constraints_default.json"))


BENCHES = {
    "cutoff_search x200": bench_cutoff,
    "equilibrium x132": bench_equilibrium,
    "pull_in_search x2000": bench_pull_in,
    "grid_search 880 pts": bench_grid_search,
}


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    previous = kernels.backend()
    print(f"{'benchmark':24s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    try:
        for name, fn in BENCHES.items():
            row = []
            for b in backends:
                kernels.set_backend(b)
                row.append(best_of(fn, args.repeat))
            line = f"{name:24s}" + "".join(f"{t * 1e3:10.2f}ms" for t in row)
            if len(row) > 1:
                line += f"{row[-1] / row[0]:11.1f}x"
            print(line)
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()
