"""Acceptance suite: one test per shipping criterion.

Each test prints a single `CRITERION n: PASS/FAIL` line (visible under
`pytest -s`) and then asserts the criterion at its stated tolerance.
Budgets are wall-clock on a single core; the invariant criterion assumes
the compiled kernel (the pure fallback is roughly 12x slower and will
blow the budget honestly).
"""

import time

from ipobisim.bisim import check_weak_bisim, congruence_harness, contextual_oracle
from ipobisim.ipo import Config
from ipobisim.sweeps import (
    cbv_counterexample,
    check_correspondence,
    check_tables,
    et_corpus,
    invariant_sweep,
)
from ipobisim.terms import parse_term

K_TEXT = "K"
ETA_K_TEXT = "S(K K)(S K K)"


def _report(n: int, ok: bool, detail: str) -> None:
    print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, detail


def test_criterion_1_second_order_coincidence():
    a = parse_term(K_TEXT, "clstar")
    b = parse_term(ETA_K_TEXT, "clstar")
    cfg = Config("clstar", "second", "lazy", "finite")
    t0 = time.monotonic()
    v = check_weak_bisim(a, b, cfg, depth=8, fuel=200)
    dt = time.monotonic() - t0
    ok = v.kind == "equivalent" and v.depth == 8 and dt < 10.0
    _report(1, ok, f"K vs S(K K)(S K K) second-order lazy: {v.kind}({v.depth}) in {dt:.2f}s")


def test_criterion_2_first_order_discrimination():
    a = parse_term(K_TEXT, "cl")
    b = parse_term(ETA_K_TEXT, "cl")
    cfg = Config("cl", "first", "lazy", "reactive_only", arg_pool=2)
    v = check_weak_bisim(a, b, cfg, depth=2, fuel=200)
    witness = v.trace[-1] if v.trace else None
    ok = (
        v.kind == "distinguished"
        and v.depth <= 2
        and witness is not None
        and witness[2] == "unmatched_label"
    )
    _report(2, ok, f"same pair first-order pool 2: {v.kind}({v.depth}), witness {witness}")


def test_criterion_3_cbv_counterexample_both_facts():
    rep = cbv_counterexample(depth=4, fuel=512, context_bound=5)
    game = rep["game"]
    ctx = rep["contextual"]
    want_trace = [
        {"label": "[_] ?y1", "side": "both", "reason": "step"},
        {"label": "[_] ?y1", "side": "right", "reason": "unmatched_label"},
    ]
    ok = (
        game["verdict"] == "distinguished"
        and game["trace"] == want_trace
        and ctx["verdict"] == "distinguished"
    )
    _report(
        3,
        ok,
        "identity vs eta-expansion: cbv game "
        f"{game['verdict']} with 2-step trace; lazy context witness "
        f"{ctx['trace'][0]['label'] if ctx.get('trace') else None}",
    )


def test_criterion_4_translation_identity_corpus():
    t0 = time.monotonic()
    rep = et_corpus(max_size=7, fuel=1000)
    dt = time.monotonic() - t0
    ok = (
        rep["normalizing"] > 0
        and rep["confirmed"] == rep["normalizing"]
        and dt < 60.0
    )
    _report(
        4,
        ok,
        f"{rep['confirmed']}/{rep['normalizing']} normalizing closed lambda terms "
        f"size<=7 confirmed in {dt:.1f}s",
    )


def test_criterion_5_table_engine_equivalence():
    t0 = time.monotonic()
    rep = check_tables(max_size=6, max_metavars=2, arg_bound=2)
    dt = time.monotonic() - t0
    ok = rep["diffs"] == 0 and rep["terms"] == 797_916 and dt < 300.0
    _report(
        5,
        ok,
        f"generic engine vs tables (finite + bounded reactive) on "
        f"{rep['terms']} terms: {rep['diffs']} diffs in {dt:.1f}s",
    )


def test_criterion_6_correspondence_spot_checks():
    rep = check_correspondence(depth=6, fuel=512)
    ok = (
        rep["ok"]
        and rep["convertible"]["equivalent"] == 20
        and rep["inequivalent"]["distinguished"] == 10
        and rep["exceptions"] == 0
    )
    _report(
        6,
        ok,
        f"{rep['convertible']['equivalent']}/20 convertible pairs equivalent, "
        f"{rep['inequivalent']['distinguished']}/10 separable pairs distinguished, "
        f"{rep['exceptions']} exceptions",
    )


def test_criterion_7_congruence_harness():
    pairs = [(parse_term(K_TEXT, "clstar"), parse_term(ETA_K_TEXT, "clstar"))]
    cfg = Config("clstar", "second", "lazy", "finite")
    rep = congruence_harness(pairs, cfg, samples=200, seed=42, depth=8, fuel=512)
    ok = rep.verdict == "pass" and not rep.failures and rep.stats["samples"] == 200
    _report(
        7,
        ok,
        f"200 random closure samples on certified pair: {len(rep.failures)} "
        f"distinguished at depth 6",
    )


def test_criterion_8_invariant_suite():
    t0 = time.monotonic()
    rep = invariant_sweep(8, mgu_pairs=10_000, seed=42)
    dt = time.monotonic() - t0
    ok = (
        rep["violations_total"] == 0
        and rep["terms"] == 3_577_590
        and rep["mgu"]["pairs"] == 10_000
        and dt < 120.0
    )
    _report(
        8,
        ok,
        f"{rep['terms']} terms + {rep['mgu']['pairs']} unifier pairs on "
        f"{rep['backend']} kernel: {rep['violations_total']} violations in {dt:.1f}s",
    )
