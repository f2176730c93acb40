"""Benchmark the co-comment pair accumulation kernel: compiled vs numpy.

Generates a synthetic corpus, builds the per-article membership arrays once,
and times both kernel backends on identical input.

Usage: python3 benchmarks/bench_cocomment.py [--users N] [--repeats R]
"""

import argparse
import time

import numpy as np

from echoscope import kernels, synth
from echoscope._pairs_py import accumulate_pair_counts as numpy_kernel


def membership_arrays(corpus):
    u_index = {u: i for i, u in enumerate(sorted({c.user_id for c in corpus.comments}))}
    parts = []
    indptr = [0]
    for aid in sorted(corpus.comments_by_article):
        distinct = {u_index[corpus.comments[ci].user_id] for ci in corpus.comments_by_article[aid]}
        if len(distinct) < 2:
            continue
        parts.append(np.fromiter(sorted(distinct), dtype=np.int32, count=len(distinct)))
        indptr.append(indptr[-1] + len(distinct))
    members = np.concatenate(parts) if parts else np.empty(0, dtype=np.int32)
    return np.asarray(indptr, dtype=np.int64), members


def bench(fn, indptr, members, repeats):
    times = []
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(indptr, members)
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--users", type=int, default=5000)
    parser.add_argument("--articles-per-medium", type=int, default=300)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = synth.SynthConfig(
        n_users=args.users,
        articles_per_medium=args.articles_per_medium,
        comments_min=20,
        comments_max=120,
        seed=args.seed,
    )
    print(f"generating corpus ({args.users} users)...")
    corpus, _ = synth.generate(cfg)
    indptr, members = membership_arrays(corpus)
    n_slots = len(members)
    print(f"{len(corpus.comments)} comments, {len(indptr) - 1} articles, {n_slots} membership slots")

    backends = [("numpy", numpy_kernel)]
    if kernels.KERNEL_BACKEND == "cython":
        backends.append(("cython", kernels.accumulate_pair_counts))
    else:
        print("compiled kernel unavailable; benchmarking the numpy fallback only")

    results = {}
    for name, fn in backends:
        elapsed, out = bench(fn, indptr, members, args.repeats)
        results[name] = (elapsed, out)
        print(f"{name:>7}: {elapsed * 1e3:9.1f} ms  ({len(out[2])} edges)")

    if len(results) == 2:
        a, b = results["cython"][1], results["numpy"][1]
        agree = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b))
        speedup = results["numpy"][0] / results["cython"][0]
        print(f"outputs identical: {agree}; cython speedup: {speedup:.2f}x")


if __name__ == "__main__":
    main()
