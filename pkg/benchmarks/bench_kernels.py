"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mcastgame import kernels
from mcastgame.scenario import Partition, derive_constants, generate_scenario
from mcastgame.value import value_table


def _best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    s18 = generate_scenario(7, 18)
    k = derive_constants(s18)
    args = (np.array(s18.valuations), np.array(k.alphas), np.array(s18.rates), k.cost)
    v16 = value_table(generate_scenario(7, 16))
    v12 = value_table(generate_scenario(7, 12))
    v10 = value_table(generate_scenario(7, 10))
    blocks16 = np.array(Partition.sequential(16, 4).blocks, dtype=np.int64)
    grand12 = Partition.grand(12).blocks
    x16 = np.linspace(0, 1, 16)
    return [
        ("value_table n=18", lambda b: b.value_table(*args)),
        ("subset_sums n=16", lambda b: b.subset_sums(x16)),
        ("convexity scan n=12", lambda b: b.first_convexity_violation(v12, 12, 1e9)),
        ("split scan block=12", lambda b: b.first_split_violation(v12, grand12, 1e9)),
        ("incompatible scan n=16", lambda b: b.first_incompatible_violation(v16, blocks16, 16, 1e9)),
        ("best partition n=10", lambda b: b.best_partition(v10, 10)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    print(f"{'kernel':<26}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases():
        times = [_best_time(lambda: fn(kernels.get_backend(b)), args.repeat) for b in backends]
        row = f"{name:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
