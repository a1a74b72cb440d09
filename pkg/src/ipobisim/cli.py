"""Command-line front end.

Machine-readable JSON goes to stdout, short human-readable summaries to
stderr, so pipelines can consume results while a terminal user still
sees what happened.  Exit codes: 0 success / equivalent, 1 distinguished
(or a failed property suite), 2 unknown, 64 usage error, 65 term parse
error.  Identical argv (plus seed) produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import reduction
from .bisim import (
    Verdict,
    applicative_oracle,
    check_weak_bisim,
    congruence_harness,
    contextual_oracle,
    lts_explore,
)
from .ipo import Config, UnsupportedConfig, format_label
from .sweeps import (
    cbv_counterexample,
    check_correspondence,
    check_tables,
    et_corpus,
    invariant_sweep,
)
from .terms import ParseError, format_term, parse_term
from .translate import to_cl, to_lambda

EXIT_OK = 0
EXIT_DISTINGUISHED = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_PARSE = 65

_LABEL_SETS = {"reactive": "reactive_only", "all": "all_ipo", "finite": "finite"}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; we reserve 2 for
    'unknown' verdicts, so remap usage errors to 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, human: str | None = None) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")
    if human is not None:
        sys.stderr.write(human + "\n")


def _verdict_exit(v: Verdict) -> int:
    return {
        "equivalent": EXIT_OK,
        "distinguished": EXIT_DISTINGUISHED,
        "unknown": EXIT_UNKNOWN,
    }[v.kind]


def _describe(v: Verdict) -> str:
    if v.kind == "equivalent":
        return f"equivalent (depth {v.depth})"
    if v.kind == "distinguished":
        steps = " ; ".join(f"{l} [{s}:{r}]" for l, s, r in v.trace)
        return f"distinguished in {v.depth} move(s): {steps}"
    return f"unknown ({v.reason})"


def _config(args) -> Config:
    return Config(
        calculus=args.calculus,
        order=args.order,
        strategy=args.strategy,
        label_set=_LABEL_SETS[args.labels],
        arg_pool=args.pool,
    )


def _add_config_flags(p, order="second", calculus="clstar", labels="reactive"):
    p.add_argument("--calculus", default=calculus, choices=["lambda", "cl", "clstar"])
    p.add_argument("--order", default=order, choices=["first", "second"])
    p.add_argument("--strategy", default="lazy", choices=["lazy", "cbv"])
    p.add_argument("--labels", default=labels, choices=sorted(_LABEL_SETS))
    p.add_argument("--pool", type=int, default=3, help="argument pool bound")


def _seed(args) -> int:
    env = os.environ.get("IPOBISIM_SEED")
    return int(env) if env else args.seed


def build_parser() -> _Parser:
    top = _Parser(prog="ipobisim", description=__doc__.splitlines()[0])
    top.add_argument("--jobs", type=int, default=1, help="worker cap (driver is single-threaded)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo the canonical form of a term")
    p.add_argument("term")
    p.add_argument("--calculus", default="clstar", choices=["lambda", "cl", "clstar"])

    p = sub.add_parser("reduce", help="normalize a term, optionally tracing steps")
    p.add_argument("term")
    p.add_argument("--calculus", default="clstar", choices=["lambda", "cl", "clstar"])
    p.add_argument("--strategy", default="lazy", choices=["lazy", "cbv"])
    p.add_argument("--fuel", type=int, default=512)
    p.add_argument("--trace", action="store_true", help="emit one JSON line per step")

    p = sub.add_parser("translate", help="map between the lambda calculus and combinators")
    p.add_argument("term")
    p.add_argument("--dir", default="lambda-to-cl", choices=["lambda-to-cl", "cl-to-lambda"])

    p = sub.add_parser("lts", help="explore the labelled transition system breadth-first")
    p.add_argument("term")
    _add_config_flags(p)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--fuel", type=int, default=512)
    p.add_argument("--format", default="json", choices=["json", "text"])

    p = sub.add_parser("bisim", help="play the bounded weak bisimulation game")
    p.add_argument("left")
    p.add_argument("right")
    _add_config_flags(p)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--fuel", type=int, default=512)
    p.add_argument(
        "--divergence-blind",
        action="store_true",
        help="treat mutual silence as matching instead of reporting fuel",
    )

    p = sub.add_parser("check-tables", help="diff the generic label engine against the tables")
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--max-metavars", type=int, default=2)
    p.add_argument("--arg-bound", type=int, default=2)

    p = sub.add_parser("oracle", help="independent comparisons used to cross-check the game")
    kind = p.add_subparsers(dest="kind", required=True)
    a = kind.add_parser("applicative", help="iterated application of pool arguments")
    a.add_argument("left")
    a.add_argument("right")
    a.add_argument("--calculus", default="clstar", choices=["lambda", "cl", "clstar"])
    a.add_argument("--strategy", default="lazy", choices=["lazy", "cbv"])
    a.add_argument("--depth", type=int, default=6)
    a.add_argument("--fuel", type=int, default=512)
    c = kind.add_parser("contextual", help="search small closing contexts for a halting split")
    c.add_argument("left")
    c.add_argument("right")
    c.add_argument("--calculus", default="lambda", choices=["lambda", "cl", "clstar"])
    c.add_argument("--strategy", default="lazy", choices=["lazy", "cbv"])
    c.add_argument("--max-context-size", type=int, default=5)
    c.add_argument("--fuel", type=int, default=512)

    p = sub.add_parser("prop", help="property suites backing the acceptance criteria")
    suite = p.add_subparsers(dest="suite", required=True)
    g = suite.add_parser("congruence", help="random (context, substitution) closure samples")
    g.add_argument("--samples", type=int, default=200)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--depth", type=int, default=8)
    g.add_argument("--fuel", type=int, default=512)
    g.add_argument(
        "--pair",
        action="append",
        nargs=2,
        metavar=("LEFT", "RIGHT"),
        help="pair to certify and close over (default: K vs S(K K)(S K K))",
    )
    i = suite.add_parser("invariants", help="stepper/label/unifier invariants on the enumeration")
    i.add_argument("--max-size", type=int, default=8)
    i.add_argument("--mgu-pairs", type=int, default=10_000)
    i.add_argument("--seed", type=int, default=42)
    i.add_argument("--pure", action="store_true", help="force the pure-Python kernel")
    e = suite.add_parser("et-corpus", help="translation identity over closed lambda terms")
    e.add_argument("--max-size", type=int, default=7)
    e.add_argument("--fuel", type=int, default=1000)
    x = suite.add_parser(
        "cbv-counterexample",
        help="identity vs eta-expansion: cbv game split and lazy context witness",
    )
    x.add_argument("--depth", type=int, default=4)
    x.add_argument("--fuel", type=int, default=512)
    x.add_argument("--max-context-size", type=int, default=5)
    r = suite.add_parser("correspondence", help="translation preserves (in)equivalence on fixed pairs")
    r.add_argument("--depth", type=int, default=6)
    r.add_argument("--fuel", type=int, default=512)

    return top


# --------------------------------------------------------------------------
# subcommand bodies
# --------------------------------------------------------------------------


def _cmd_parse(args) -> int:
    t = parse_term(args.term, args.calculus)
    text = format_term(t)
    _emit({"calculus": args.calculus, "term": text}, text)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    t = parse_term(args.term, args.calculus)
    if args.trace:
        cur, steps = t, 0
        while steps < args.fuel:
            r = reduction.step(cur, args.calculus, args.strategy)
            if r.kind != reduction.STEPPED:
                break
            cur = r.next
            steps += 1
            sys.stdout.write(
                json.dumps({"step": steps, "term": format_term(cur)}, sort_keys=True) + "\n"
            )
    n = reduction.normalize_tau(t, args.calculus, args.strategy, args.fuel)
    out = {"term": format_term(n.result), "steps": n.steps, "status": n.status}
    _emit(out, f"{n.status} after {n.steps} step(s): {format_term(n.result)}")
    return EXIT_OK if n.status == reduction.NORMAL else EXIT_UNKNOWN


def _cmd_translate(args) -> int:
    if args.dir == "lambda-to-cl":
        res = to_cl(parse_term(args.term, "lambda"))
    else:
        res = to_lambda(parse_term(args.term, "clstar"))
    text = format_term(res)
    _emit({"input": args.term, "dir": args.dir, "result": text}, text)
    return EXIT_OK


def _cmd_lts(args) -> int:
    cfg = _config(args)
    t = parse_term(args.term, cfg.calculus)
    graph = lts_explore(t, cfg, depth=args.depth, fuel=args.fuel)
    if args.format == "json":
        for tr in graph.transitions:
            sys.stdout.write(json.dumps(tr.to_json(), sort_keys=True) + "\n")
    else:
        for tr in graph.transitions:
            fold = "" if tr.tau_folded is None else f"  (+{tr.tau_folded} silent)"
            sys.stdout.write(
                f"{format_term(tr.source)}  --{format_label(tr.label)}-->  "
                f"{format_term(tr.target)}{fold}\n"
            )
    sys.stderr.write(
        f"{len(graph.states)} state(s), {len(graph.transitions)} transition(s), "
        f"frontier {len(graph.frontier)}\n"
    )
    return EXIT_OK


def _cmd_bisim(args) -> int:
    cfg = _config(args)
    a = parse_term(args.left, cfg.calculus)
    b = parse_term(args.right, cfg.calculus)
    v = check_weak_bisim(
        a, b, cfg, depth=args.depth, fuel=args.fuel, divergence_blind=args.divergence_blind
    )
    _emit(v.to_json(), _describe(v))
    return _verdict_exit(v)


def _cmd_check_tables(args) -> int:
    rep = check_tables(
        max_size=args.max_size, max_metavars=args.max_metavars, arg_bound=args.arg_bound
    )
    _emit(rep, f"{rep['terms']} term(s), {rep['diffs']} diff(s)")
    return EXIT_OK if rep["diffs"] == 0 else EXIT_DISTINGUISHED


def _cmd_oracle(args) -> int:
    a = parse_term(args.left, args.calculus)
    b = parse_term(args.right, args.calculus)
    if args.kind == "applicative":
        v = applicative_oracle(
            a, b, args.calculus, args.strategy, depth=args.depth, fuel=args.fuel
        )
    else:
        v = contextual_oracle(
            a, b, args.calculus, args.strategy,
            size_bound=args.max_context_size, fuel=args.fuel,
        )
    _emit(v.to_json(), _describe(v))
    return _verdict_exit(v)


def _cmd_prop(args) -> int:
    if args.suite == "congruence":
        pair_texts = args.pair or [["K", "S(K K)(S K K)"]]
        pairs = [
            (parse_term(l, "clstar"), parse_term(r, "clstar")) for l, r in pair_texts
        ]
        cfg = Config("clstar", "second", "lazy", "finite")
        rep = congruence_harness(
            pairs, cfg, samples=args.samples, seed=_seed(args),
            depth=args.depth, fuel=args.fuel,
        )
        out = rep.to_json()
        wall = out["stats"].pop("wall_ms", None)  # keep stdout reproducible
        _emit(out, f"congruence {rep.verdict}: {rep.stats['samples']} sample(s), "
                   f"{len(rep.failures)} failure(s), {wall} ms")
        return EXIT_OK if rep.verdict == "pass" else EXIT_DISTINGUISHED
    if args.suite == "invariants":
        rep = invariant_sweep(
            args.max_size, mgu_pairs=args.mgu_pairs, seed=_seed(args),
            force_pure=args.pure,
        )
        _emit(rep, f"{rep['terms']} term(s) on {rep['backend']} kernel, "
                   f"{rep['violations_total']} violation(s)")
        return EXIT_OK if rep["violations_total"] == 0 else EXIT_DISTINGUISHED
    if args.suite == "et-corpus":
        rep = et_corpus(max_size=args.max_size, fuel=args.fuel)
        ok = rep["confirmed"] == rep["normalizing"]
        _emit(rep, f"{rep['confirmed']}/{rep['normalizing']} normalizing term(s) confirmed")
        return EXIT_OK if ok else EXIT_DISTINGUISHED
    if args.suite == "cbv-counterexample":
        rep = cbv_counterexample(
            depth=args.depth, fuel=args.fuel, context_bound=args.max_context_size
        )
        _emit(rep, "confirmed" if rep["ok"] else "NOT confirmed")
        return EXIT_OK if rep["ok"] else EXIT_DISTINGUISHED
    rep = check_correspondence(depth=args.depth, fuel=args.fuel)
    _emit(rep, "correspondence ok" if rep["ok"] else "correspondence FAILED")
    return EXIT_OK if rep["ok"] else EXIT_DISTINGUISHED


_DISPATCH = {
    "parse": _cmd_parse,
    "reduce": _cmd_reduce,
    "translate": _cmd_translate,
    "lts": _cmd_lts,
    "bisim": _cmd_bisim,
    "check-tables": _cmd_check_tables,
    "oracle": _cmd_oracle,
    "prop": _cmd_prop,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.jobs < 1:
        sys.stderr.write("ipobisim: error: --jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        return _DISPATCH[args.command](args)
    except ParseError as e:
        sys.stderr.write(f"ipobisim: parse error: {e}\n")
        return EXIT_PARSE
    except UnsupportedConfig as e:
        sys.stderr.write(f"ipobisim: unsupported configuration: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
