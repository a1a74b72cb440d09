"""First-order syntactic unification over combinator terms.

Metavariables are the unification variables; every other constructor is
rigid.  `mgu` returns an idempotent most general unifier as a plain dict
(metavariable name -> term), or None when the terms clash or the occurs
check trips.  The solver keeps an explicit work queue and a triangular
binding map, resolving bindings fully only once at the end, so unifying
large terms does not recurse.
"""

from __future__ import annotations

from .terms import (
    TAG_APP,
    TAG_KP,
    TAG_META,
    TAG_SP,
    TAG_SPP,
    Meta,
    fresh_metavar,
)


def _occurs(name: str, t, bindings) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        tag = x[0]
        if tag == TAG_META:
            if x[1] == name:
                return True
            bound = bindings.get(x[1])
            if bound is not None:
                stack.append(bound)
        elif tag == TAG_KP or tag == TAG_SP:
            stack.append(x[1])
        elif tag == TAG_SPP or tag == TAG_APP:
            stack.append(x[1])
            stack.append(x[2])
    return False


def _resolve(t, bindings):
    """Fully apply a triangular binding map (acyclic by occurs check)."""
    tag = t[0]
    if tag == TAG_META:
        bound = bindings.get(t[1])
        return t if bound is None else _resolve(bound, bindings)
    if tag == TAG_KP or tag == TAG_SP:
        return (tag, _resolve(t[1], bindings))
    if tag == TAG_SPP or tag == TAG_APP:
        return (tag, _resolve(t[1], bindings), _resolve(t[2], bindings))
    return t


def mgu(a, b):
    """Most general unifier of two combinator terms, or None.

    The result is idempotent: no bound name occurs in any binding's
    right-hand side.
    """
    bindings: dict = {}

    def walk(t):
        while t[0] == TAG_META:
            bound = bindings.get(t[1])
            if bound is None:
                return t
            t = bound
        return t

    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        x = walk(x)
        y = walk(y)
        if x == y:
            continue
        if x[0] == TAG_META:
            if _occurs(x[1], y, bindings):
                return None
            bindings[x[1]] = y
            continue
        if y[0] == TAG_META:
            if _occurs(y[1], x, bindings):
                return None
            bindings[y[1]] = x
            continue
        if x[0] != y[0]:
            return None
        if x[0] == TAG_KP or x[0] == TAG_SP:
            queue.append((x[1], y[1]))
        elif x[0] == TAG_SPP or x[0] == TAG_APP:
            queue.append((x[1], y[1]))
            queue.append((x[2], y[2]))
        else:  # distinct leaves with equal tags were caught by x == y
            return None
    return {name: _resolve(t, bindings) for name, t in bindings.items()}


def rename_apart(t, avoid):
    """Rename the metavariables of t bijectively to canonical fresh names
    (the least `y1, y2, ...` not in avoid), in first-occurrence order.

    Returns (renamed term, {old name: new name}).
    """
    avoid = set(avoid)
    mapping: dict = {}

    def go(x):
        tag = x[0]
        if tag == TAG_META:
            new = mapping.get(x[1])
            if new is None:
                new = fresh_metavar(avoid, "y")
                avoid.add(new)
                mapping[x[1]] = new
            return Meta(new)
        if tag == TAG_KP or tag == TAG_SP:
            return (tag, go(x[1]))
        if tag == TAG_SPP or tag == TAG_APP:
            return (tag, go(x[1]), go(x[2]))
        return x

    return go(t), mapping
