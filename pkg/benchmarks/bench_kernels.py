"""Time the numba kernels against their numpy fallbacks on catalog-sized inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is called once per backend before timing so that numba's
compilation is not counted; outputs of the two backends are compared.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from normcat import _kernels
from normcat.catalog import cyclic, dihedral, product_of, symmetric
from normcat.finalg import subgroups


def workloads():
    for G in (product_of(symmetric(3), cyclic(4)), product_of(dihedral(4), cyclic(2), cyclic(2)), symmetric(4)):
        table = np.ascontiguousarray(G.table, dtype=np.int32)
        inv = np.ascontiguousarray(G.inverse, dtype=np.int32)
        sub = max((H for H in subgroups(G) if not H.is_normal()), key=lambda H: H.order, default=G.whole())
        members = np.ascontiguousarray(sub.mask)
        elems = np.asarray(sub.elements, dtype=np.int32)
        gens = np.asarray(G.generators, dtype=np.int32)
        rng = np.random.default_rng(0)
        maps = rng.integers(0, G.order, size=(4096, G.order), dtype=np.int32)
        maps[0] = np.arange(G.order)
        yield G, {
            "is_associative": (table,),
            "normalizer_scan": (table, inv, members, elems),
            "centralizer_scan": (table, elems),
            "hom_check": (table, gens, table, maps),
        }


def bench(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = list(_kernels.IMPLEMENTATIONS)
    print(f"{'group':<22}{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for G, work in workloads():
        for name, call in work.items():
            times, outs = [], []
            for b in backends:
                fn = _kernels.IMPLEMENTATIONS[b][name]
                fn(*call)  # warm-up / compile
                t, out = bench(fn, call, args.repeat)
                times.append(t)
                outs.append(np.asarray(out))
            assert all(np.array_equal(outs[0], o) for o in outs[1:]), f"{name}: backends disagree"
            speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
            print(f"{G.name:<22}{name:<18}" + "".join(f"{t * 1e3:>10.3f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
