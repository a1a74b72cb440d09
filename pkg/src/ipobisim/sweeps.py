"""Corpus sweeps: bulk checks over enumerated term spaces.

Three drivers, all returning plain counter dictionaries (JSON-ready):

* `check_tables` — the two label engines must agree term-for-term, both
  in the finite mode and in the bounded reactive mode.
* `et_corpus` — round-tripping lambda terms through the combinator
  translation preserves normal forms for every normalizing closed term.
* `invariant_sweep` — stepper/classification coherence, determinism,
  label-count bounds and print/parse round-trips over the full closed
  enumeration, plus unifier spot checks on random pairs.  The per-term
  loop is the hot path of the whole package; when the compiled kernel is
  present its fused sweep is used, otherwise a pure-Python twin runs the
  same checks (the counters must match — see tests/test_kernels.py).
"""

from __future__ import annotations

import random

from . import kernel
from .bisim import check_weak_bisim, contextual_oracle
from .ipo import Config, format_label, labels_generic, labels_table
from .reduction import normalize_full
from .terms import (
    App,
    K,
    Kp,
    Meta,
    S,
    Sp,
    Spp,
    enumerate_terms,
    format_term,
    free_metavars,
    parse_term,
)
from .translate import check_et_identity, to_cl
from .unify import mgu


def check_tables(
    max_size: int = 6,
    max_metavars: int = 2,
    arg_bound: int = 2,
    diff_cap: int = 20,
):
    """Compare `labels_generic` against `labels_table` over every
    extended combinator term up to the size bound with metavariables
    drawn from a fixed pool, under the finite label set (inner overlaps
    pruned) and under the reactive set at the argument-vector bound."""
    if not 0 <= max_metavars <= 3:
        raise ValueError("metavariable pool supports up to three names")
    pool = ("x", "y", "z")[:max_metavars]
    fin = Config("clstar", "second", "lazy", "finite", arg_pool=arg_bound)
    react = Config(
        "clstar", "second", "lazy", "reactive_only", arg_pool=arg_bound
    )
    out = {"terms": 0, "diffs": 0, "examples": []}
    for t in enumerate_terms(max_size, pool, "clstar"):
        out["terms"] += 1
        for name, cfg in (("finite", fin), ("reactive", react)):
            got = sorted(format_label(l) for l in labels_generic(t, cfg))
            want = sorted(format_label(l) for l in labels_table(t, cfg))
            if got != want:
                out["diffs"] += 1
                if len(out["examples"]) < diff_cap:
                    out["examples"].append(
                        {
                            "term": format_term(t),
                            "mode": name,
                            "generic": got,
                            "table": want,
                        }
                    )
    return out


def et_corpus(max_size: int = 7, fuel: int = 1000):
    """Check the translation identity on every closed lambda term up to
    the size bound.  The fuel defines which terms count as normalizing;
    the identity check itself escalates its budget when needed, because
    the embedded combinator image takes noticeably more normal-order
    steps than the source (nested binder towers at size 7 already need
    ~1.2x the filter fuel).  Confirmed always means both sides actually
    reached alpha-equal normal forms; a completed mismatch raises from
    check_et_identity."""
    out = {
        "terms": 0,
        "normalizing": 0,
        "confirmed": 0,
        "retries": 0,
        "skipped_diverging": 0,
        "skipped_embedded_fuel": 0,
    }
    for t in enumerate_terms(max_size, (), "lambda"):
        out["terms"] += 1
        n = normalize_full(t, fuel)
        if n.status != "normal":
            out["skipped_diverging"] += 1
            continue
        out["normalizing"] += 1
        budget = fuel
        res = check_et_identity(t, budget)
        while res.status != "confirmed" and budget < fuel * 64:
            budget *= 4
            out["retries"] += 1
            res = check_et_identity(t, budget)
        if res.status == "confirmed":
            out["confirmed"] += 1
        else:
            out["skipped_embedded_fuel"] += 1
    return out


# --------------------------------------------------------------------------
# correspondence spot checks
# --------------------------------------------------------------------------

# Closed normalizing pairs related by beta conversion: their combinator
# images must be weakly bisimilar.
CONVERTIBLE_PAIRS = (
    (r"(\x.x) (\x.x)", r"\x.x"),
    (r"(\x.x x) (\y.y)", r"\x.x"),
    (r"(\x.\y.x) (\z.z) (\w.w w)", r"\z.z"),
    (r"(\x.\y.y) (\z.z z)", r"\y.y"),
    (r"(\x.x) (\x.\y.x)", r"\x.\y.x"),
    (r"(\x.\y.x) (\a.\b.b)", r"\y.\a.\b.b"),
    (r"(\f.\x.f x) (\y.y)", r"\x.(\y.y) x"),
    (r"(\x.\y.x) ((\z.z) (\w.w))", r"\y.\w.w"),
    (r"(\x.\y.y x) (\z.z)", r"\y.y (\z.z)"),
    (r"(\x.x) ((\y.y) (\z.\w.z))", r"\z.\w.z"),
    (r"(\x.x (\y.y)) (\z.z)", r"\y.y"),
    (r"(\x.\y.x y) (\z.z)", r"\y.(\z.z) y"),
    (r"(\a.\b.a b) (\x.x) (\y.\z.y)", r"\y.\z.y"),
    (r"(\x.\y.\z.x z (y z)) (\x.\y.x) (\x.x) (\x.x)", r"\x.x"),
    (r"(\x.\y.y) ((\w.w w) (\w.w w))", r"\y.y"),
    (r"(\x.\y.x y) (\z.z z)", r"\y.(\z.z z) y"),
    (r"(\x.x) ((\x.x) ((\x.x) (\y.\z.z)))", r"\y.\z.z"),
    (r"(\a.\b.b a) (\x.x) (\y.y)", r"(\y.y) (\x.x)"),
    (r"(\x.\y.x (x y)) (\z.z)", r"\y.(\z.z) ((\z.z) y)"),
    (r"(\f.f (f (\x.x))) (\y.y)", r"\x.x"),
)

# Closed normalizing pairs separable by a context under the lazy
# strategy: their combinator images must be distinguished.
INEQUIVALENT_PAIRS = (
    (r"\x.x", r"\x.\y.x"),
    (r"\x.x", r"\x.\y.x y"),
    (r"\x.\y.x", r"\x.\y.y"),
    (r"\x.x", r"\x.x x"),
    (r"\x.\y.y", r"\x.x"),
    (r"\x.\y.x y", r"\x.\y.y x"),
    (r"\x.x (\y.y)", r"\x.x"),
    (r"\x.\y.\z.x", r"\x.\y.x"),
    (r"\x.x x", r"\x.x x x"),
    (r"\x.\y.x", r"\x.\y.x y"),
)


def check_correspondence(depth: int = 6, fuel: int = 512):
    """Run the bisimulation game on the combinator images of the two
    fixed pair corpora above; convertible pairs must come out
    equivalent, separable ones distinguished, and nothing may raise."""
    cfg = Config("clstar", "second", "lazy", "finite")
    out = {
        "convertible": {"pairs": 0, "equivalent": 0},
        "inequivalent": {"pairs": 0, "distinguished": 0},
        "exceptions": 0,
        "failures": [],
    }

    def run(pairs, bucket, want):
        for sa, sb in pairs:
            out[bucket]["pairs"] += 1
            try:
                ta = to_cl(parse_term(sa, "lambda"))
                tb = to_cl(parse_term(sb, "lambda"))
                v = check_weak_bisim(ta, tb, cfg, depth=depth, fuel=fuel)
            except Exception as exc:  # the criterion demands zero raises
                out["exceptions"] += 1
                out["failures"].append({"pair": [sa, sb], "error": repr(exc)})
                continue
            if v.kind == want:
                out[bucket][want] += 1
            else:
                out["failures"].append({"pair": [sa, sb], "verdict": v.to_json()})

    run(CONVERTIBLE_PAIRS, "convertible", "equivalent")
    run(INEQUIVALENT_PAIRS, "inequivalent", "distinguished")
    out["ok"] = (
        out["exceptions"] == 0
        and not out["failures"]
        and out["convertible"]["equivalent"] == len(CONVERTIBLE_PAIRS)
        and out["inequivalent"]["distinguished"] == len(INEQUIVALENT_PAIRS)
    )
    return out


def cbv_counterexample(depth: int = 4, fuel: int = 512, context_bound: int = 5):
    """The identity function and its one-argument eta-expansion: their
    combinator images separate in the second-order cbv game, and a small
    closing context already separates the lambda terms under the lazy
    strategy.  Reports both facts."""
    lam_id = parse_term(r"\x.x", "lambda")
    lam_eta = parse_term(r"\x.\y.x y", "lambda")
    ta, tb = to_cl(lam_id), to_cl(lam_eta)
    cfg = Config("clstar", "second", "cbv", "reactive_only")
    game = check_weak_bisim(ta, tb, cfg, depth=depth, fuel=fuel)
    ctx = contextual_oracle(
        lam_id, lam_eta, "lambda", "lazy", size_bound=context_bound, fuel=fuel
    )
    return {
        "pair": [format_term(ta), format_term(tb)],
        "game": game.to_json(),
        "contextual": ctx.to_json(),
        "ok": game.kind == "distinguished" and ctx.kind == "distinguished",
    }


# --------------------------------------------------------------------------
# invariant sweep
# --------------------------------------------------------------------------


def _python_term_sweep(size_bound: int):
    """Pure-Python twin of the compiled fused sweep: enumerate every
    closed extended combinator term up to the bound and check, per term:
    classification/stepper coherence for both strategies, stepper
    determinism, the label-count bound, and the print/parse round trip."""
    step_lazy = kernel.step_lazy
    step_cbv = kernel.step_cbv
    classify_lazy = kernel.classify_lazy
    classify_cbv = kernel.classify_cbv
    counters = {
        "terms": 0,
        "lazy_values": 0,
        "lazy_reducibles": 0,
        "cbv_values": 0,
        "cbv_reducibles": 0,
        "violations": 0,
    }
    examples = []

    def violate(kind, t):
        counters["violations"] += 1
        if len(examples) < 10:
            examples.append({"check": kind, "term": format_term(t)})

    for t in enumerate_terms(size_bound, (), "clstar"):
        counters["terms"] += 1
        code, _var, _n = classify_lazy(t)
        r1 = step_lazy(t)
        if code == kernel.CLS_VALUE:
            counters["lazy_values"] += 1
            if r1 is not None:
                violate("lazy_value_steps", t)
        elif code == kernel.CLS_REDUCIBLE:
            counters["lazy_reducibles"] += 1
            if r1 is None:
                violate("lazy_reducible_stuck", t)
            elif step_lazy(t) != r1:
                violate("lazy_nondeterminism", t)
        else:
            violate("lazy_open_class_on_closed", t)
        ccode, _cv, _cn = classify_cbv(t)
        s1 = step_cbv(t)
        if ccode == kernel.CLS_VALUE:
            counters["cbv_values"] += 1
            if s1 is not None:
                violate("cbv_value_steps", t)
        elif ccode == kernel.CLS_REDUCIBLE:
            counters["cbv_reducibles"] += 1
            if s1 is None:
                violate("cbv_reducible_stuck", t)
            elif step_cbv(t) != s1:
                violate("cbv_nondeterminism", t)
        else:
            violate("cbv_open_class_on_closed", t)
        # closed terms afford exactly one label in the finite mode
        if code not in (kernel.CLS_VALUE, kernel.CLS_REDUCIBLE):
            violate("label_bound", t)
        if parse_term(format_term(t), "clstar") != t:
            violate("round_trip", t)
    counters["examples"] = examples
    return counters


def _mgu_spot_checks(pairs: int, seed: int, max_size: int = 6):
    """Soundness and idempotence of the unifier on random term pairs."""
    rng = random.Random(seed)
    atoms = [K, S, Meta("x"), Meta("y")]

    def rand_term(budget: int):
        if budget <= 1:
            return rng.choice(atoms)
        shape = rng.randrange(6)
        if shape == 0:
            return Kp(rand_term(budget - 1))
        if shape == 1:
            return Sp(rand_term(budget - 1))
        if shape == 2 and budget >= 3:
            i = rng.randint(1, budget - 2)
            return Spp(rand_term(i), rand_term(budget - 1 - i))
        i = rng.randint(1, budget - 1)
        return App(rand_term(i), rand_term(budget - i))

    out = {"pairs": 0, "unified": 0, "violations": 0}
    for _ in range(pairs):
        a = rand_term(rng.randint(1, max_size))
        b = rand_term(rng.randint(1, max_size))
        out["pairs"] += 1
        theta = mgu(a, b)
        if theta is None:
            continue
        out["unified"] += 1
        sa = kernel.subst_metas(a, theta)
        sb = kernel.subst_metas(b, theta)
        if sa != sb:
            out["violations"] += 1
            continue
        resub = {v: kernel.subst_metas(t, theta) for v, t in theta.items()}
        if resub != theta:
            out["violations"] += 1
    return out


def invariant_sweep(
    size_bound: int = 8,
    mgu_pairs: int = 10_000,
    seed: int = 42,
    force_pure: bool = False,
):
    """The full invariant suite: the per-term sweep over the closed
    enumeration (compiled when available) plus unifier spot checks."""
    if kernel.fused_sweep is not None and not force_pure:
        counters = kernel.fused_sweep(size_bound)
        counters["backend"] = "compiled"
    else:
        counters = _python_term_sweep(size_bound)
        counters["backend"] = "pure"
    counters["mgu"] = _mgu_spot_checks(mgu_pairs, seed)
    counters["violations_total"] = (
        counters["violations"] + counters["mgu"]["violations"]
    )
    return counters
