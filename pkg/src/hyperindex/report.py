"""End-to-end analysis: plan form, components, indices, excluded games, verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .equilibria import NashComponent, equilibrium_components
from .excluded import (
    ComponentData,
    FactorUnresolvable,
    GenericityFailure,
    HyperstabilityReport,
    factorized_index,
    outcome_check,
)
from .gametree import GameTree, TreeNormalForm, normal_form
from .index import IndexSolver
from .normalform import reduce

SCHEMA = "hyperindex-report/1"


class GameTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class AnalysisOptions:
    seed: int = 0
    strict: bool = False
    cross_check: bool = False
    factorize: bool = True
    max_strategies: int = 40  # per player, for full enumeration
    name: str = ""


@dataclass
class ComponentReport:
    id: str
    extremes: list  # [(x map, y map, payoffs)]
    outcome: dict | None
    payoffs: tuple | None
    index: int | None
    method: str
    hyperstability: HyperstabilityReport | None = None
    notes: list = field(default_factory=list)


@dataclass
class AnalysisReport:
    name: str
    summary: dict
    components: list
    index_sum: int | None
    seed: int

    def component(self, cid: str) -> ComponentReport:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)


def _mixed(labels, v) -> dict:
    return {l: w for l, w in zip(labels, v) if w}


def analyze(tree: GameTree, options: AnalysisOptions = AnalysisOptions()) -> AnalysisReport:
    nf = normal_form(tree, plans=True)
    g = nf.game
    m, n = g.shape
    if max(m, n) > options.max_strategies:
        raise GameTooLarge(
            f"plan form is {m}x{n}; full enumeration is capped at {options.max_strategies} strategies per player"
        )
    red, _ = reduce(g)
    summary = {
        "terminals": len(tree.terminals),
        "infosets": [len(tree.infosets[1]), len(tree.infosets[2])],
        "plan_form": [m, n],
        "reduced_normal_form": list(red.shape),
    }
    comps = equilibrium_components(g)
    solver = IndexSolver(g, comps, seed=options.seed, cross_check=options.cross_check)
    reports = []
    total = 0
    for c in comps:
        reports.append(_component_report(tree, nf, c, solver, options))
        total = None if total is None or reports[-1].index is None else total + reports[-1].index
    return AnalysisReport(options.name, summary, reports, total, options.seed)


def _component_report(tree, nf: TreeNormalForm, c: NashComponent, solver: IndexSolver, options) -> ComponentReport:
    g = nf.game
    extremes = [(_mixed(g.row_labels, e.x), _mixed(g.col_labels, e.y), e.payoffs) for e in c.extremes]
    res = solver.index(c)
    data = ComponentData.from_component(nf, c)
    chk, _ = outcome_check(tree, data)
    out = dict(chk.outcome.probs) if chk.unique else None
    payoffs = c.extremes[0].payoffs if chk.unique else None
    rep = ComponentReport(c.id, extremes, out, payoffs, res.value, res.method)
    if not chk.unique:
        rep.notes.append("outcome not unique; factorization skipped")
        return rep
    if options.factorize:
        try:
            rep.hyperstability = factorized_index(tree, data, seed=options.seed, strict=options.strict)
        except FactorUnresolvable as ex:
            rep.notes.append(f"factorization unresolved: {ex}")
    return rep


def verdict(rep: ComponentReport) -> str:
    if rep.index is None:
        return "undetermined"
    return "hyperstable" if rep.index != 0 else "not hyperstable"


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def q(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _qmap(d: dict) -> dict:
    return {k: q(v) for k, v in d.items()}


def hyperstability_json(h: HyperstabilityReport) -> dict:
    return {
        "component": h.component_id,
        "outcome": _qmap(dict(h.outcome.probs)) if h.outcome else None,
        "payoffs": [q(v) for v in h.payoffs] if h.payoffs else None,
        "factors": list(h.factors),
        "product": h.product,
        "full_index": h.full_index,
        "excluded_games": [
            {
                "player": f.player,
                "rows": list(f.excluded.game.row_labels),
                "columns": list(f.excluded.game.col_labels),
                "A": [[q(v) for v in r] for r in f.excluded.game.A],
                "B": [[q(v) for v in r] for r in f.excluded.game.B],
                "on_path_payoff": q(f.excluded.on_path_payoff),
                "polytope_index": f.value,
            }
            for f in h.player_factors
            if f.excluded is not None
        ],
        "diagnostics": [{"name": d.name, "passed": d.passed, "detail": d.detail} for d in h.diagnostics],
        "verdict": h.verdict,
    }


def to_json(report: AnalysisReport) -> str:
    doc = {
        "schema": SCHEMA,
        "game": report.name,
        "seed": report.seed,
        "summary": report.summary,
        "components": [
            {
                "id": c.id,
                "extreme_equilibria": [
                    {"x": _qmap(x), "y": _qmap(y), "payoffs": [q(v) for v in p]} for x, y, p in c.extremes
                ],
                "outcome": _qmap({z: p for z, p in c.outcome.items() if p}) if c.outcome else None,
                "index": c.index,
                "index_method": c.method,
                "verdict": verdict(c),
                "hyperstability": hyperstability_json(c.hyperstability) if c.hyperstability else None,
                "notes": c.notes,
            }
            for c in report.components
        ],
        "index_sum": report.index_sum,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _fmt(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _signed(v: int) -> str:
    return f"{v:+d}" if v else "0"


def _mix_text(d: dict) -> str:
    return " + ".join(k if w == 1 else f"{_fmt(w)} {k}" for k, w in d.items())


def to_text(report: AnalysisReport) -> str:
    s = report.summary
    lines = [
        f"game {report.name or '<input>'}: {s['terminals']} terminals, plan form {s['plan_form'][0]}x{s['plan_form'][1]}, "
        f"reduced {s['reduced_normal_form'][0]}x{s['reduced_normal_form'][1]}",
        f"{len(report.components)} components, index sum {report.index_sum}",
    ]
    for c in report.components:
        lines.append(f"{c.id}: index {_signed(c.index)} ({c.method}), {verdict(c)}")
        for x, y, p in c.extremes:
            lines.append(f"    ({_mix_text(x)}; {_mix_text(y)}) pays ({_fmt(p[0])}, {_fmt(p[1])})")
        h = c.hyperstability
        if h is not None:
            if h.product is None:
                lines.append(f"    factorization: {h.verdict}")
            else:
                f1, fi, f2 = h.factors
                lines.append(f"    factorization: {_signed(f1)} x {_signed(fi)} x {_signed(f2)} = {_signed(h.product)}")
            for d in h.diagnostics:
                lines.append(f"    {d.name} {'pass' if d.passed else 'FAIL'}: {d.detail}")
        for note in c.notes:
            lines.append(f"    note: {note}")
    return "\n".join(lines) + "\n"
