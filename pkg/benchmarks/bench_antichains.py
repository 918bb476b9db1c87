"""Compare the compiled and pure-Python antichain counters.

    python3 benchmarks/bench_antichains.py [--n 4] [--shards 3] [--repeat 3]

Both backends run the same search on the same shards of the partition poset.
At n = 5 only the ``--shards`` smallest shards are timed by default, because
the pure-Python recursion needs minutes for the full count.
"""

from __future__ import annotations

import argparse
import statistics
import time

from qstable import kernels
from qstable.qcond import poset


def time_backend(backend: str, after: list[int], shards: list[int], repeat: int) -> tuple[int, float]:
    runs = []
    total = 0
    for _ in range(repeat):
        start = time.perf_counter()
        total = kernels.count_from(after, shards, backend)
        runs.append(time.perf_counter() - start)
    return total, statistics.median(runs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--shards", type=int, default=None, help="time only the k smallest shards")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ps = poset(args.n)
    after = list(ps.incomparable_after)
    order = sorted(range(len(after)), key=lambda i: after[i].bit_count())
    k = args.shards if args.shards is not None else (len(order) if args.n <= 4 else 40)
    shards = order[:k]
    print(f"n={args.n}: {len(after)} partitions, timing {len(shards)} of {len(after)} shards")

    results = {}
    for backend in kernels.available_backends():
        total, secs = time_backend(backend, after, shards, args.repeat)
        results[backend] = (total, secs)
        print(f"  {backend:>7}: {total} antichains in {secs * 1e3:.2f} ms (median of {args.repeat})")
    if len({t for t, _ in results.values()}) > 1:
        raise SystemExit("backends disagree")
    if "cython" in results:
        speedup = results["python"][1] / max(results["cython"][1], 1e-9)
        print(f"  speedup: {speedup:.1f}x")


if __name__ == "__main__":
    main()
