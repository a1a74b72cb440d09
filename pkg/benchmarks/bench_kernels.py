#!/usr/bin/env python3
"""Benchmark the pure-Python stepper against the compiled twin.

Runs the hot kernels over the closed enumeration and the fused invariant
sweep at a configurable bound, and prints one table row per workload:

    python3 benchmarks/bench_kernels.py --max-size 6
"""

import argparse
import time

from ipobisim import _step_py
from ipobisim.sweeps import _python_term_sweep
from ipobisim.terms import enumerate_terms

try:
    from ipobisim import _step_core
except ImportError:
    _step_core = None


def _time(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _bench_normalize(impl, corpus, fuel):
    normalize = impl.normalize_lazy

    def run():
        acc = 0
        for t in corpus:
            acc += normalize(t, fuel)[1]
        return acc

    return _time(run)


def _bench_classify(impl, corpus):
    lazy, cbv = impl.classify_lazy, impl.classify_cbv

    def run():
        acc = 0
        for t in corpus:
            acc += lazy(t)[0] + cbv(t)[0]
        return acc

    return _time(run)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=6)
    ap.add_argument("--fuel", type=int, default=512)
    args = ap.parse_args()

    corpus = list(enumerate_terms(args.max_size, (), "clstar"))
    print(f"closed corpus size <= {args.max_size}: {len(corpus)} terms")
    if _step_core is None:
        print("compiled kernel not built; showing pure numbers only")

    rows = []
    for name, fn in [
        ("normalize_lazy", lambda impl: _bench_normalize(impl, corpus, args.fuel)),
        ("classify (both)", lambda impl: _bench_classify(impl, corpus)),
    ]:
        out_p, dt_p = fn(_step_py)
        row = [name, f"{dt_p:.3f}s"]
        if _step_core is not None:
            out_c, dt_c = fn(_step_core)
            assert out_p == out_c, f"{name}: backends disagree"
            row += [f"{dt_c:.3f}s", f"{dt_p / dt_c:.1f}x"]
        rows.append(row)

    swept_p, dt_p = _time(lambda: _python_term_sweep(args.max_size))
    row = ["invariant sweep", f"{dt_p:.3f}s"]
    if _step_core is not None:
        swept_c, dt_c = _time(lambda: _step_core.sweep_invariants(args.max_size))
        assert swept_p == swept_c, "sweep counters disagree"
        row += [f"{dt_c:.3f}s", f"{dt_p / dt_c:.1f}x"]
    rows.append(row)

    headers = ["workload", "pure"] + (["compiled", "speedup"] if _step_core else [])
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


if __name__ == "__main__":
    main()
