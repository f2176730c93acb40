"""Kernel backend selection: compiled extension if available, numpy otherwise.

Both backends implement accumulate_pair_counts(indptr, members) with
identical output; tests assert equality and benchmarks/bench_cocomment.py
compares their speed.
"""

try:
    from echoscope._accel import accumulate_pair_counts

    KERNEL_BACKEND = "cython"
except ImportError:  # extension not built; numpy fallback
    from echoscope._pairs_py import accumulate_pair_counts

    KERNEL_BACKEND = "numpy"

__all__ = ["accumulate_pair_counts", "KERNEL_BACKEND"]
