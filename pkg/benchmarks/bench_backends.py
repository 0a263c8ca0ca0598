"""Compare the compiled kernels against the pure-Python fallback.

Times the two hot kernels in isolation and the batchers end to end, once per
available backend, and prints a table (optionally also a CSV).

    python benchmarks/bench_backends.py --repeat 5 --csv backends.csv
"""

import argparse
import csv
import itertools
import statistics
import sys
import time

import numpy as np

from graphbatch import _backend
from graphbatch.batchers import cycle_shuffle_stream, make_batcher
from graphbatch.datagen import aflow_like, gen_dataset, qm9_like


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), min(samples)


def kernel_cases(size, seed):
    rng = np.random.default_rng(seed)
    nodes = rng.integers(1, 40, size, dtype=np.int64)
    edges = rng.integers(0, 400, size, dtype=np.int64)
    indices = np.concatenate([rng.integers(0, n, e) for n, e in zip(nodes, edges)]).astype(np.int64)

    def split():
        _backend.kernels.dynamic_split(nodes, edges, 704, 7040, 32)

    def offsets():
        _backend.kernels.offset_indices(indices, edges, nodes)

    return {"dynamic_split": split, "offset_indices": offsets}


def batcher_cases(dataset_size, steps, seed):
    datasets = {"qm9like": gen_dataset(qm9_like(dataset_size, seed)),
                "aflowlike": gen_dataset(aflow_like(dataset_size, seed))}
    cases = {}
    for (label, ds), alg in itertools.product(datasets.items(), ("static64", "dynamic")):
        def run(ds=ds, alg=alg):
            it, _ = make_batcher(alg, cycle_shuffle_stream(ds, seed), 32)
            for _ in itertools.islice(it, steps):
                pass
        cases[f"{alg}/{label}"] = run
    return cases


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kernel-size", type=int, default=200_000)
    ap.add_argument("--dataset-size", type=int, default=5000)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)

    cases = {f"kernel:{k}": v for k, v in kernel_cases(args.kernel_size, args.seed).items()}
    cases.update({f"batcher:{k}": v for k, v in batcher_cases(args.dataset_size, args.steps, args.seed).items()})

    backends = sorted(_backend.BACKENDS)
    if "cython" not in backends:
        print("note: compiled extension not built, timing the fallback only", file=sys.stderr)
    rows = []
    previous = _backend.name
    try:
        for case, fn in cases.items():
            medians = {}
            for b in backends:
                _backend.set_backend(b)
                fn()  # warm caches
                med, best = _time(fn, args.repeat)
                medians[b] = med
                rows.append({"case": case, "backend": b, "median_s": med, "min_s": best})
            if len(medians) == 2:
                rows[-1]["speedup"] = medians["python"] / medians["cython"]
    finally:
        _backend.set_backend(previous)

    print(f"{'case':34s} {'backend':8s} {'median_s':>10s} {'min_s':>10s} {'speedup':>8s}")
    for r in rows:
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else ""
        print(f"{r['case']:34s} {r['backend']:8s} {r['median_s']:10.4f} {r['min_s']:10.4f} {sp:>8s}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, ["case", "backend", "median_s", "min_s", "speedup"])
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
