"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from splitsync import _pykernels
from splitsync.catalog import cerny, cerny_cnfa
from splitsync.core import random_cnfa
from splitsync.critical import symbol_pool

try:
    from splitsync import _ckernels
except ImportError:
    _ckernels = None


def _sync(mod):
    for n in range(8, 13):
        dfa = cerny(n)
        k = mod.SyncKernel([s.targets() for s in dfa.symbols], n)
        assert k.search(range(2))[0] == (n - 1) ** 2


def _nfa(mod):
    for n in range(6, 10):
        imgs = [s.images for s in cerny_cnfa(n).symbols]
        assert mod.nfa_search(imgs, n, 10**7)[0] == (n - 1) ** 2
    for seed in range(200):
        aut = random_cnfa(4, 2, 0.3, seed)
        mod.nfa_search([s.images for s in aut.symbols], 4, 10**7)


def _filter(mod):
    pool = symbol_pool(4)
    k = mod.SyncKernel(pool, 4)
    for r in range(0, len(pool), 7):
        k.filter([r], list(range(r + 1, len(pool))), 9)


CASES = {"sync-bfs": _sync, "nfa-bfs": _nfa, "search-filter": _filter}


def best_of(fn, mod, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':<15}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, fn in CASES.items():
        py = best_of(fn, _pykernels, args.repeat)
        if _ckernels is None:
            print(f"{name:<15}{py:>10.3f}{'-':>10}{'-':>9}")
            continue
        cy = best_of(fn, _ckernels, args.repeat)
        print(f"{name:<15}{py:>10.3f}{cy:>10.3f}{py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
