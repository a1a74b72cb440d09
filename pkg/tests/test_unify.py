"""Unification tests: frozen examples, soundness/idempotence on random
pairs, completeness on pairs built to unify, and an exhaustive
most-generality check on a small grid."""

from __future__ import annotations

import random

from ipobisim.terms import (
    App,
    K,
    Kp,
    Meta,
    S,
    apply_subst,
    enumerate_terms,
    free_metavars,
    parse_term,
)
from ipobisim.unify import mgu, rename_apart

import oracles


def cl(text):
    return parse_term(text)


def test_mgu_frozen_examples():
    assert mgu(cl("K ?x1"), cl("K K")) == {"x1": K}
    assert mgu(Meta("x"), Kp(Meta("x"))) is None  # occurs check
    assert mgu(cl("?x K"), cl("K'(?a) ?b")) == {"x": Kp(Meta("a")), "b": K}


def test_mgu_clash_cases():
    assert mgu(K, S) is None
    assert mgu(cl("K ?x"), cl("S ?x")) is None
    assert mgu(cl("K'(K)"), cl("S'(K)")) is None
    assert mgu(cl("K K"), cl("K'(K)")) is None


def test_mgu_shared_variables():
    got = mgu(cl("?x ?x"), cl("(K ?y) (K K)"))
    assert got == {"x": cl("K K"), "y": K}


def test_mgu_is_symmetric_up_to_solution_equivalence():
    a, b = cl("?x (K ?y)"), cl("S''(?z,?z) ?w")
    for left, right in [(a, b), (b, a)]:
        theta = mgu(left, right)
        assert theta is not None
        assert apply_subst(a, theta) == apply_subst(b, theta)


def test_mgu_soundness_and_idempotence_random_pairs():
    pool = list(enumerate_terms(4, ("x", "y"), "clstar"))
    rng = random.Random(7)
    hits = 0
    for _ in range(2000):
        a, b = rng.choice(pool), rng.choice(pool)
        theta = mgu(a, b)
        if theta is None:
            continue
        hits += 1
        assert oracles.is_unifier(theta, a, b)
        assert oracles.is_idempotent(theta)
        # domain only mentions variables of the problem
        assert set(theta) <= free_metavars(a) | free_metavars(b)
    assert hits > 50  # sanity: the sample did exercise the success path


def test_mgu_completeness_on_constructed_instances():
    pool = list(enumerate_terms(3, ("x", "y"), "clstar"))
    closed = [t for t in enumerate_terms(3, (), "clstar")]
    rng = random.Random(11)
    for _ in range(500):
        pattern = rng.choice(pool)
        ground = {
            v: rng.choice(closed) for v in free_metavars(pattern)
        }
        instance = apply_subst(pattern, ground)
        theta = mgu(pattern, instance)
        assert theta is not None
        assert apply_subst(pattern, theta) == instance


def test_mgu_failure_means_no_ground_unifier():
    pool = list(enumerate_terms(3, ("x", "y"), "clstar"))
    closed = [t for t in enumerate_terms(2, (), "clstar")]
    rng = random.Random(13)
    checked = 0
    while checked < 200:
        a, b = rng.choice(pool), rng.choice(pool)
        if mgu(a, b) is not None:
            continue
        checked += 1
        names = sorted(free_metavars(a) | free_metavars(b))
        for _ in range(20):
            sigma = {v: rng.choice(closed) for v in names}
            assert apply_subst(a, sigma) != apply_subst(b, sigma)


def test_mgu_most_general_exhaustively_on_small_grid():
    # every ground unifier sigma over the grid must factor through the mgu:
    # sigma(t) == sigma(theta(t)) for both terms
    grid = list(enumerate_terms(2, (), "clstar"))
    a, b = cl("?x (K ?y)"), cl("?z ?z")
    theta = mgu(a, b)
    assert theta is not None
    names = sorted(free_metavars(a) | free_metavars(b))
    found = 0
    for gx in grid:
        for gy in grid:
            for gz in grid:
                sigma = dict(zip(names, (gx, gy, gz)))
                if apply_subst(a, sigma) == apply_subst(b, sigma):
                    found += 1
                    for t in (a, b):
                        assert apply_subst(apply_subst(t, theta), sigma) == apply_subst(
                            t, sigma
                        )
    assert found > 0


def test_rename_apart_frozen_examples():
    t, mapping = rename_apart(cl("K ?x"), {"x"})
    assert t == cl("K ?y1") and mapping == {"x": "y1"}
    t, mapping = rename_apart(cl("?x ?x"), {"x", "y1"})
    assert t == cl("?y2 ?y2") and mapping == {"x": "y2"}


def test_rename_apart_is_bijective_and_fresh():
    t = cl("S''(?a,?b) (?a ?c)")
    avoid = {"a", "b", "y1"}
    renamed, mapping = rename_apart(t, avoid)
    assert sorted(mapping) == ["a", "b", "c"]
    values = list(mapping.values())
    assert len(set(values)) == len(values)
    assert not (set(values) & avoid)
    assert apply_subst(t, {k: Meta(v) for k, v in mapping.items()}) == renamed
