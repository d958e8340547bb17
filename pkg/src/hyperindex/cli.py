"""Command line entry point."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .equilibria import equilibrium_components
from .excluded import (
    ComponentData,
    FactorUnresolvable,
    GenericityFailure,
    NoExcludedGame,
    excluded_game,
    factorized_index,
    observable_deviations,
    on_off_partition,
    outcome_check,
    supporting_polytope_index,
)
from .gamefile import GameFileError, parse_game
from .gametree import normal_form
from .index import ComponentStraddlesBoundary, IndexSolver, MethodDisagreement, Unresolvable
from .report import AnalysisOptions, GameTooLarge, analyze, hyperstability_json, q, to_json, to_text

EXIT_OK, EXIT_INPUT, EXIT_GENERICITY, EXIT_UNRESOLVED = 0, 1, 2, 3


def load_tree(source: str, epsilon=None):
    """A file path, or the name of a bundled game."""
    p = Path(source)
    if p.is_file():
        return parse_game(p.read_text(encoding="utf-8")), p.stem
    if source in corpus.GAMES:
        return corpus.load(source, epsilon), source
    raise FileNotFoundError(f"no such file or bundled game: {source}")


def _seed(args) -> int:
    env = os.environ.get("HYPERINDEX_SEED")
    return int(env) if env is not None else args.seed


def _component(tree, args):
    nf = normal_form(tree, plans=True)
    if args.profile:
        return nf, ComponentData.from_representative(nf, {args.profile[0]: 1}, {args.profile[1]: 1}, args.component or "K"), None
    comps = equilibrium_components(nf.game)
    for c in comps:
        if c.id == args.component:
            return nf, ComponentData.from_component(nf, c), comps
    raise KeyError(f"no component {args.component!r}; found {', '.join(c.id for c in comps)}")


def cmd_analyze(args, out) -> int:
    tree, name = load_tree(args.file, args.epsilon)
    report = analyze(tree, AnalysisOptions(seed=_seed(args), strict=args.strict, cross_check=args.cross_check, name=name))
    out.write(to_text(report))
    if args.json:
        Path(args.json).write_text(to_json(report), encoding="utf-8")
    return EXIT_OK


def cmd_index(args, out) -> int:
    tree, _ = load_tree(args.file, args.epsilon)
    nf, data, comps = _component(tree, args)
    seed = _seed(args)
    if comps is None:
        rep = factorized_index(tree, data, seed=seed, strict=args.strict)
        out.write(f"{data.id}: factorized index {rep.product} ({rep.verdict})\n")
        out.write(json.dumps(hyperstability_json(rep), indent=2) + "\n")
        return EXIT_OK
    res = IndexSolver(nf.game, comps, seed=seed, cross_check=args.cross_check).index(data.component)
    out.write(f"{data.id}: index {res.value} ({res.method})\n")
    for m, v in res.by_method:
        out.write(f"  {m}: {v}\n")
    return EXIT_OK


def cmd_excluded(args, out) -> int:
    tree, _ = load_tree(args.file, args.epsilon)
    nf, data, _ = _component(tree, args)
    chk, how = outcome_check(tree, data)
    if not chk.unique:
        out.write(f"{data.id}: outcome not unique ({how} check)\n")
        return EXIT_GENERICITY
    part = on_off_partition(tree, chk.outcome)
    devs = observable_deviations(tree, part, nf)
    try:
        eg = excluded_game(tree, part, chk.outcome, args.player, devs[args.player - 1])
    except NoExcludedGame as ex:
        out.write(f"{ex}; factor 1\n")
        return EXIT_OK
    g = eg.game
    out.write(f"excluded game of player {args.player} (rows deviate), on-path payoff {q(eg.on_path_payoff)}\n")
    width = max(len(l) for l in g.row_labels)
    out.write(" " * width + " | " + " | ".join(g.col_labels) + "\n")
    for l, ra, rb in zip(g.row_labels, g.A, g.B):
        cells = " | ".join(f"{Fraction(a)},{Fraction(b)}" for a, b in zip(ra, rb))
        out.write(f"{l:<{width}} | {cells}\n")
    det = supporting_polytope_index(eg, seed=_seed(args))
    out.write(f"supporting polytope index {det.value}\n")
    return EXIT_OK


def cmd_demo(args, out) -> int:
    from .demos import run_demo

    res = run_demo(args.name, args.epsilon, seed=_seed(args))
    out.write(to_text(res.report))
    for desc, ok, detail in res.checks:
        out.write(f"{'ok' if ok else 'FAILED'}: {desc}: {detail}\n")
    return EXIT_OK if res.passed else EXIT_UNRESOLVED


def cmd_corpus(args, out) -> int:
    for name in corpus.GAMES:
        out.write(f"{name}\t{corpus.path(name)}\n")
    for name in corpus.DEMOS:
        out.write(f"{name}\t(demo)\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperindex", description="Index and hyperstability analysis of two-player games.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, component=False):
        sp.add_argument("file", help="game file or bundled game name")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--epsilon", type=Fraction, default=None, help="payoff tweak for repeated_fig6")
        sp.add_argument("--strict", action="store_true", help="fail on genericity violations")
        sp.add_argument("--cross-check", action="store_true", help="run every index method")
        if component:
            sp.add_argument("--component", default=None)
            sp.add_argument("--profile", nargs=2, metavar=("ROW", "COL"), help="pure representative instead of enumeration")

    a = sub.add_parser("analyze", help="full report")
    common(a)
    a.add_argument("--json", metavar="OUT", help="also write the JSON report")
    common(sub.add_parser("index", help="index of one component"), component=True)
    e = sub.add_parser("excluded", help="excluded game of one component")
    common(e, component=True)
    e.add_argument("--player", type=int, choices=(1, 2), required=True)
    d = sub.add_parser("demo", help="bundled demonstrations")
    d.add_argument("name", choices=corpus.DEMOS)
    d.add_argument("--epsilon", type=Fraction, default=None)
    d.add_argument("--seed", type=int, default=0)
    sub.add_parser("corpus", help="list bundled games")
    return p


COMMANDS = {"analyze": cmd_analyze, "index": cmd_index, "excluded": cmd_excluded, "demo": cmd_demo, "corpus": cmd_corpus}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command in ("index", "excluded") and not (args.component or args.profile):
        print("error: --component or --profile is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except (GameFileError, FileNotFoundError, KeyError, ValueError) as ex:
        if isinstance(ex, GenericityFailure):
            print(f"genericity failure: {ex}", file=sys.stderr)
            return EXIT_GENERICITY
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except (Unresolvable, FactorUnresolvable, MethodDisagreement, ComponentStraddlesBoundary, GameTooLarge) as ex:
        print(f"unresolved: {ex}", file=sys.stderr)
        return EXIT_UNRESOLVED


if __name__ == "__main__":
    sys.exit(main())
