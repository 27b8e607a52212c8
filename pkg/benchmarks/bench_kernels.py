"""Throughput of the batch kernels, python backend vs compiled, with the
structural map sampler for scale.  Run as a script; no arguments."""

import time

from polydisk import rng_stream, sample_bol3
from polydisk._kernels import _py

try:
    from polydisk._kernels import _speedups
except ImportError:
    _speedups = None


def timed(label, n, fn):
    t0 = time.perf_counter()
    fn()
    dt = time.perf_counter() - t0
    print(f"{label:<34} {n / dt:>12,.0f}/s  ({dt:.2f}s)")


def main():
    backends = [("python", _py)]
    if _speedups is not None:
        backends.append(("cython", _speedups))
    for name, mod in backends:
        timed(f"forest sizes p=3   [{name}]", 10000,
              lambda: mod.sample_forest_sizes(3, 10000, rng_stream(1), 10 ** 6))
        timed(f"accepted sizes p=3 [{name}]", 10000,
              lambda: mod.sample_bol3_sizes(3, 10000, rng_stream(2), 10 ** 6))
        timed(f"label p=256        [{name}]", 100,
              lambda: mod.sample_label_at(256, 10923, 100, rng_stream(3)))

    def structural():
        rng = rng_stream(4)
        for _ in range(3000):
            sample_bol3(3, rng)

    timed("structural maps p=3", 3000, structural)


if __name__ == "__main__":
    main()
