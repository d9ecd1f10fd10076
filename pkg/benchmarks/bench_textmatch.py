"""Benchmark the edit-distance kernel backends against each other.

Run:  python3 benchmarks/bench_textmatch.py [--pairs N] [--repeats R]

Times the numba kernel (when importable), the vectorized numpy fallback, and
the plain-python reference over the same randomized workload of title-like
strings, and cross-checks that all backends agree before trusting any timing.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from citeaudit._kernels import BACKEND, levenshtein_with_backend

WORDS = (
    "pavement subgrade resilient modulus prediction soil moisture asphalt "
    "binder aggregate stabilization geotextile embankment recycled load "
    "spectra design performance cold regions damage analysis model field"
).split()


def make_pairs(count: int, rng: random.Random) -> list[tuple[str, str]]:
    pairs = []
    for _ in range(count):
        a = " ".join(rng.choices(WORDS, k=rng.randint(4, 9)))
        # half the pairs are perturbed copies, half are unrelated titles
        if rng.random() < 0.5:
            chars = list(a)
            for _ in range(rng.randint(1, 4)):
                pos = rng.randrange(len(chars))
                chars[pos] = rng.choice("abcdefghijklmnopqrstuvwxyz ")
            b = "".join(chars)
        else:
            b = " ".join(rng.choices(WORDS, k=rng.randint(4, 9)))
        pairs.append((a, b))
    return pairs


def run_backend(backend: str, pairs: list[tuple[str, str]], repeats: int) -> tuple[list[int], float]:
    # warm-up pass so numba's compile time does not pollute the measurement
    results = [levenshtein_with_backend(a, b, backend) for a, b in pairs[:10]]
    timings = []
    for _ in range(repeats):
        started = time.perf_counter()
        results = [levenshtein_with_backend(a, b, backend) for a, b in pairs]
        timings.append(time.perf_counter() - started)
    return results, statistics.median(timings)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2000, help="string pairs per run")
    parser.add_argument("--repeats", type=int, default=5, help="timed repetitions")
    args = parser.parse_args()

    rng = random.Random(1234)
    pairs = make_pairs(args.pairs, rng)

    backends = ["python", "numpy"]
    if BACKEND == "numba":
        backends.append("numba")
    else:
        print("numba backend unavailable; comparing python and numpy only")

    results = {}
    medians = {}
    for backend in backends:
        results[backend], medians[backend] = run_backend(backend, pairs, args.repeats)

    first = backends[0]
    for backend in backends[1:]:
        if results[backend] != results[first]:
            raise SystemExit(f"backend disagreement: {backend} vs {first}")

    baseline = medians["python"]
    print(f"active default backend: {BACKEND}")
    print(f"{args.pairs} pairs, median of {args.repeats} runs\n")
    print(f"{'backend':<8} {'median (ms)':>12} {'pairs/sec':>12} {'vs python':>10}")
    for backend in backends:
        median = medians[backend]
        print(
            f"{backend:<8} {median * 1000:>12.2f} {args.pairs / median:>12.0f}"
            f" {baseline / median:>9.1f}x"
        )


if __name__ == "__main__":
    main()
