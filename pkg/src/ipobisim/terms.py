"""Term representations, parsing, printing and enumeration.

Two object languages share this module:

* untyped lambda terms — de Bruijn indices for bound variables, explicit
  named free variables, display-name hints kept out of equality;
* combinator terms over K and S — in the plain flavour (applications of
  K and S only) and the extended flavour, which adds the explicit
  partial-application constructors K'(M), S'(M), S''(M,N) and named
  metavariables ?x.

Combinator terms are plain tuples tagged by a small integer in slot 0:
cheap to hash, compare and share, which matters because the test sweeps
enumerate millions of them.  Lambda terms are frozen dataclasses; they
never appear in hot loops.

The size metric used by `enumerate_terms` and all "size <= N" bounds in
this package counts leaves (K, S, variables) and partial-application
constructors as 1 and application nodes as 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from . import _step_py as _k

# --------------------------------------------------------------------------
# Combinator terms: tagged tuples
# --------------------------------------------------------------------------

TAG_K = _k.TAG_K
TAG_S = _k.TAG_S
TAG_KP = _k.TAG_KP
TAG_SP = _k.TAG_SP
TAG_SPP = _k.TAG_SPP
TAG_APP = _k.TAG_APP
TAG_META = _k.TAG_META
TAG_HOLE = 7  # context hole; never produced by parse_term

CLTerm = tuple

K: CLTerm = (TAG_K,)
S: CLTerm = (TAG_S,)
HOLE: CLTerm = (TAG_HOLE,)


def Kp(t: CLTerm) -> CLTerm:
    return (TAG_KP, t)


def Sp(t: CLTerm) -> CLTerm:
    return (TAG_SP, t)


def Spp(a: CLTerm, b: CLTerm) -> CLTerm:
    return (TAG_SPP, a, b)


def App(f: CLTerm, a: CLTerm) -> CLTerm:
    return (TAG_APP, f, a)


def Meta(name: str) -> CLTerm:
    return (TAG_META, name)


def app_chain(head: CLTerm, args) -> CLTerm:
    """Left-associated application of head to a sequence of arguments."""
    for a in args:
        head = (TAG_APP, head, a)
    return head


def spine(t: CLTerm):
    """Decompose t into (head, args) where head is not an application and
    t == head a1 ... an with args = [a1, ..., an]."""
    args = []
    while t[0] == TAG_APP:
        args.append(t[2])
        t = t[1]
    args.reverse()
    return t, args


# --------------------------------------------------------------------------
# Lambda terms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LVar:
    """Bound variable (de Bruijn index, 0 = innermost binder)."""

    index: int


@dataclass(frozen=True)
class LFree:
    """Free variable, identified by name."""

    name: str


@dataclass(frozen=True)
class LAbs:
    body: "LambdaTerm"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class LApp:
    fun: "LambdaTerm"
    arg: "LambdaTerm"


@dataclass(frozen=True)
class LHole:
    """Context hole for lambda contexts."""


LambdaTerm = Union[LVar, LFree, LAbs, LApp, LHole]


def is_cl_term(t) -> bool:
    return isinstance(t, tuple)


# --------------------------------------------------------------------------
# Errors
# --------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, position: int, expected: str):
        self.position = position
        self.expected = expected
        super().__init__(f"parse error at position {position}: expected {expected}")


class OpenTermError(ValueError):
    """Raised by operations that require a closed term."""

    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"term must be closed; free: {', '.join(self.names)}")


# --------------------------------------------------------------------------
# Size
# --------------------------------------------------------------------------


def size(t) -> int:
    """Term size: leaves and partial-application constructors count 1,
    application nodes count 0.  Works for both languages."""
    if isinstance(t, tuple):
        n = 0
        stack = [t]
        while stack:
            x = stack.pop()
            tag = x[0]
            if tag == TAG_APP:
                stack.append(x[1])
                stack.append(x[2])
            elif tag == TAG_KP or tag == TAG_SP:
                n += 1
                stack.append(x[1])
            elif tag == TAG_SPP:
                n += 1
                stack.append(x[1])
                stack.append(x[2])
            else:
                n += 1
        return n
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, LApp):
            stack.append(x.fun)
            stack.append(x.arg)
        elif isinstance(x, LAbs):
            n += 1
            stack.append(x.body)
        else:
            n += 1
    return n


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------


def format_cl(t: CLTerm) -> str:
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        if type(x) is str:
            out.append(x)
            continue
        tag = x[0]
        if tag == TAG_K:
            out.append("K")
        elif tag == TAG_S:
            out.append("S")
        elif tag == TAG_META:
            out.append("?" + x[1])
        elif tag == TAG_HOLE:
            out.append("[]")
        elif tag == TAG_KP:
            out.append("K'(")
            stack.append(")")
            stack.append(x[1])
        elif tag == TAG_SP:
            out.append("S'(")
            stack.append(")")
            stack.append(x[1])
        elif tag == TAG_SPP:
            out.append("S''(")
            stack.append(")")
            stack.append(x[2])
            stack.append(",")
            stack.append(x[1])
        else:  # application: left-associated juxtaposition
            f, a = x[1], x[2]
            if a[0] == TAG_APP:
                stack.append(")")
                stack.append(a)
                stack.append(" (")
            else:
                stack.append(a)
                stack.append(" ")
            stack.append(f)
    return "".join(out)


def lambda_free_names(t: LambdaTerm) -> set:
    names = set()
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, LFree):
            names.add(x.name)
        elif isinstance(x, LAbs):
            stack.append(x.body)
        elif isinstance(x, LApp):
            stack.append(x.fun)
            stack.append(x.arg)
    return names


def format_lambda(t: LambdaTerm) -> str:
    taken = lambda_free_names(t)

    def binder_name(hint: str, env) -> str:
        name = hint or "x"
        if name not in taken and name not in env:
            return name
        i = 1
        while f"{name}{i}" in taken or f"{name}{i}" in env:
            i += 1
        return f"{name}{i}"

    def go(x, env, pos) -> str:
        # pos: "top" (no parens), "fun" (operator position), "arg"
        if isinstance(x, LVar):
            return env[x.index]
        if isinstance(x, LFree):
            return x.name
        if isinstance(x, LHole):
            return "[]"
        if isinstance(x, LAbs):
            name = binder_name(x.hint, env)
            s = f"\\{name}.{go(x.body, [name] + env, 'top')}"
            return s if pos == "top" else f"({s})"
        s = f"{go(x.fun, env, 'fun')} {go(x.arg, env, 'arg')}"
        return f"({s})" if pos == "arg" else s

    return go(t, [], "top")


def format_term(t) -> str:
    """Render a term of either language to its surface syntax."""
    return format_cl(t) if isinstance(t, tuple) else format_lambda(t)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_CL_TOKEN = re.compile(r"S''|K'|S'|[KS]|\?[A-Za-z_][A-Za-z0-9_]*|[(),]")
_WS = re.compile(r"\s*")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _parse_cl(text: str) -> CLTerm:
    pos = 0
    n = len(text)

    def skip_ws(p):
        return _WS.match(text, p).end()

    def atom(p):
        p = skip_ws(p)
        if p >= n:
            return None, p
        m = _CL_TOKEN.match(text, p)
        if m is None:
            return None, p
        tok = m.group()
        q = m.end()
        if tok == "K":
            return K, q
        if tok == "S":
            return S, q
        if tok.startswith("?"):
            return Meta(tok[1:]), q
        if tok in ("K'", "S'", "S''"):
            q = skip_ws(q)
            if q >= n or text[q] != "(":
                raise ParseError(q, "'(' after " + tok)
            first, q = term(q + 1)
            q = skip_ws(q)
            if tok == "S''":
                if q >= n or text[q] != ",":
                    raise ParseError(q, "',' in S''(_,_)")
                second, q = term(q + 1)
                q = skip_ws(q)
                if q >= n or text[q] != ")":
                    raise ParseError(q, "')'")
                return Spp(first, second), q + 1
            if q >= n or text[q] != ")":
                raise ParseError(q, "')'")
            return (Kp(first) if tok == "K'" else Sp(first)), q + 1
        if tok == "(":
            inner, q = term(q)
            q = skip_ws(q)
            if q >= n or text[q] != ")":
                raise ParseError(q, "')'")
            return inner, q + 1
        return None, p

    def term(p):
        t, p = atom(p)
        if t is None:
            raise ParseError(skip_ws(p), "a term")
        while True:
            nxt, q = atom(p)
            if nxt is None:
                return t, p
            t = App(t, nxt)
            p = q

    t, pos = term(0)
    pos = skip_ws(pos)
    if pos != n:
        raise ParseError(pos, "end of input")
    return t


def _parse_lambda(text: str) -> LambdaTerm:
    pos = 0
    n = len(text)

    def skip_ws(p):
        return _WS.match(text, p).end()

    def term(p, env):
        p = skip_ws(p)
        if p < n and text[p] == "\\":
            m = _IDENT.match(text, skip_ws(p + 1))
            if m is None:
                raise ParseError(skip_ws(p + 1), "binder name")
            name = m.group()
            q = skip_ws(m.end())
            if q >= n or text[q] != ".":
                raise ParseError(q, "'.' after binder")
            body, q = term(q + 1, [name] + env)
            return LAbs(body, hint=name), q
        return appterm(p, env)

    def appterm(p, env):
        t, p = atom(p, env)
        if t is None:
            raise ParseError(skip_ws(p), "a term")
        while True:
            nxt, q = atom(p, env)
            if nxt is None:
                return t, p
            t = LApp(t, nxt)
            p = q

    def atom(p, env):
        p = skip_ws(p)
        if p >= n:
            return None, p
        c = text[p]
        if c == "(":
            inner, q = term(p + 1, env)
            q = skip_ws(q)
            if q >= n or text[q] != ")":
                raise ParseError(q, "')'")
            return inner, q + 1
        if c == "\\":
            # an abstraction is a term, not an atom, but accepting it as the
            # trailing atom lets `x \y.y` parse the way everyone writes it
            t, q = term(p, env)
            return t, q
        m = _IDENT.match(text, p)
        if m is None:
            return None, p
        name = m.group()
        if name in env:
            return LVar(env.index(name)), m.end()
        return LFree(name), m.end()

    t, pos = term(0, [])
    pos = skip_ws(pos)
    if pos != n:
        raise ParseError(pos, "end of input")
    return t


def parse_term(text: str, calculus: str = "cl"):
    """Parse surface syntax.

    calculus="lambda" parses `\\x.x`-style lambda terms (unbound names
    become free variables); calculus="cl" (alias "clstar") parses
    combinator terms with optional K'/S'/S'' constructors and ?x
    metavariables.
    """
    if calculus == "lambda":
        return _parse_lambda(text)
    if calculus in ("cl", "clstar"):
        return _parse_cl(text)
    raise ValueError(f"unknown calculus {calculus!r}")


# --------------------------------------------------------------------------
# Metavariables, substitution, alpha equality
# --------------------------------------------------------------------------


def free_metavars(t: CLTerm) -> set:
    names = set()
    stack = [t]
    while stack:
        x = stack.pop()
        tag = x[0]
        if tag == TAG_META:
            names.add(x[1])
        elif tag == TAG_KP or tag == TAG_SP:
            stack.append(x[1])
        elif tag == TAG_SPP or tag == TAG_APP:
            stack.append(x[1])
            stack.append(x[2])
    return names


def fresh_metavar(avoid, prefix: str = "y") -> str:
    """Least canonical name `y1, y2, ...` not in avoid."""
    i = 1
    while f"{prefix}{i}" in avoid:
        i += 1
    return f"{prefix}{i}"


def apply_subst(t: CLTerm, mapping) -> CLTerm:
    """Replace metavariables by terms (no binders, so plain rebuild)."""
    return _k.subst_metas(t, mapping)


def alpha_eq(a, b) -> bool:
    """Alpha equality.  De Bruijn representation makes this structural;
    free variables compare by name, binder hints are ignored."""
    if isinstance(a, tuple) != isinstance(b, tuple):
        return False
    return a == b


def require_closed(t):
    """Raise OpenTermError if t has free (meta)variables."""
    frees = free_metavars(t) if isinstance(t, tuple) else lambda_free_names(t)
    if frees:
        raise OpenTermError(frees)
    return t


# --------------------------------------------------------------------------
# Contexts
# --------------------------------------------------------------------------


def plug(context, t):
    """Fill every hole in a one-hole context.  Lambda contexts may bind
    over the hole, so the plugged term must be closed there; combinator
    terms bind nothing and any term may be plugged."""
    if isinstance(context, tuple):
        def go_cl(c):
            tag = c[0]
            if tag == TAG_HOLE:
                return t
            if tag == TAG_KP or tag == TAG_SP:
                return (tag, go_cl(c[1]))
            if tag == TAG_SPP or tag == TAG_APP:
                return (tag, go_cl(c[1]), go_cl(c[2]))
            return c
        return go_cl(context)

    def go(c):
        if isinstance(c, LHole):
            return t
        if isinstance(c, LAbs):
            return LAbs(go(c.body), hint=c.hint)
        if isinstance(c, LApp):
            return LApp(go(c.fun), go(c.arg))
        return c
    return go(context)


# --------------------------------------------------------------------------
# Classification (extended combinator terms)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str  # value | reducible | bare_var | head_stuck | critical | no_class
    var: str | None = None
    spine_args: int = 0


_LAZY_KINDS = {
    _k.CLS_VALUE: "value",
    _k.CLS_REDUCIBLE: "reducible",
    _k.CLS_BARE_VAR: "bare_var",
    _k.CLS_HEAD_STUCK: "head_stuck",
}

_CBV_KINDS = {
    _k.CLS_VALUE: "value",
    _k.CLS_REDUCIBLE: "reducible",
    _k.CLS_BARE_VAR: "bare_var",
    _k.CLS_CRITICAL: "critical",
    _k.CLS_NO_CLASS: "no_class",
}


def classify_lazy(t: CLTerm) -> Classification:
    """Partition under the lazy strategy: value / reducible / bare_var /
    head_stuck.  Total."""
    code, var, nargs = _k.classify_lazy(t)
    return Classification(_LAZY_KINDS[code], var, nargs)


def classify_cbv(t: CLTerm) -> Classification:
    """Partition under cbv: value / reducible / bare_var / critical /
    no_class.  Total: stuck terms whose blocked position sits under a
    K'/S'/S'' argument have no critical variable and get `no_class`."""
    code, var, _ = _k.classify_cbv(t)
    return Classification(_CBV_KINDS[code], var, 0)


# --------------------------------------------------------------------------
# Enumeration (canonical order: size ascending, then constructor, then
# children lexicographically in the same order)
# --------------------------------------------------------------------------


def _cl_level(n, atoms, levels, star):
    if n == 1:
        yield from atoms
        return
    prev = levels[n - 1]
    if star:
        for t in prev:
            yield (TAG_KP, t)
        for t in prev:
            yield (TAG_SP, t)
        for i in range(1, n - 1):
            for a in levels[i]:
                for b in levels[n - 1 - i]:
                    yield (TAG_SPP, a, b)
    for i in range(1, n):
        for f in levels[i]:
            for a in levels[n - i]:
                yield (TAG_APP, f, a)


def _enumerate_cl(size_bound, pool, star) -> Iterator[CLTerm]:
    atoms = [K, S] + [Meta(x) for x in sorted(pool)]
    levels = [[]]
    for n in range(1, size_bound + 1):
        if n < size_bound:
            lvl = list(_cl_level(n, atoms, levels, star))
            levels.append(lvl)
            yield from lvl
        else:
            # stream the top size without materialising it
            yield from _cl_level(n, atoms, levels, star)


def _enumerate_lambda(size_bound, frees) -> Iterator[LambdaTerm]:
    frees = sorted(frees)
    memo = {}

    def level(n, d):
        key = (n, d)
        got = memo.get(key)
        if got is None:
            got = []
            if n == 1:
                got.extend(LVar(i) for i in range(d))
                got.extend(LFree(x) for x in frees)
            else:
                got.extend(LAbs(b) for b in level(n - 1, d + 1))
                for i in range(1, n):
                    for f in level(i, d):
                        for a in level(n - i, d):
                            got.append(LApp(f, a))
            memo[key] = got
        return got

    for n in range(1, size_bound + 1):
        yield from level(n, 0)


def enumerate_terms(size_bound: int, metavar_pool=(), calculus: str = "clstar"):
    """All terms of size <= size_bound in canonical order.

    calculus="clstar" includes the K'/S'/S'' constructors, "cl" is the
    plain fragment, "lambda" enumerates lambda terms (closed when the
    pool is empty; pool names become free variables).
    """
    if calculus == "lambda":
        return _enumerate_lambda(size_bound, metavar_pool)
    if calculus in ("cl", "clstar"):
        return _enumerate_cl(size_bound, metavar_pool, calculus == "clstar")
    raise ValueError(f"unknown calculus {calculus!r}")
