"""Bundled demonstrations: the Entry embedding and the Entrymod duplicates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus
from .equilibria import equilibrium_components
from .excluded import ComponentData, outcome_check
from .gametree import expected_payoffs, normal_form
from .perturblab import build_embedding, component_image, verify_no_equilibrium_near
from .report import AnalysisOptions, AnalysisReport, analyze

RADIUS = Fraction(1, 10)


@dataclass
class DemoResult:
    name: str
    report: AnalysisReport
    checks: list = field(default_factory=list)  # (description, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _by_payoff(tree, nf, comps) -> dict:
    out = {}
    for c in comps:
        chk, _ = outcome_check(tree, ComponentData.from_component(nf, c))
        if chk.unique:
            out[expected_payoffs(tree, chk.outcome)] = c
    return out


def entry_embedding(epsilon=Fraction(1, 100), seed: int = 0) -> DemoResult:
    spec = corpus.entry_embedding_spec(epsilon)
    emb = build_embedding(spec)
    nf = normal_form(emb.tree, plans=True)
    base = spec.base
    bnf = spec.base_nf
    targets = _by_payoff(base, bnf, equilibrium_components(bnf.game))
    out_comp = targets[(Fraction(2), Fraction(2))]
    report = analyze(emb.tree, AnalysisOptions(seed=seed, name=f"entry-embedding eps={spec.epsilon}"))
    res = verify_no_equilibrium_near(emb.tree, component_image(emb, out_comp, nf), RADIUS, nf)
    expect_cert = spec.epsilon > 0
    ok = (type(res).__name__ == "Certified") == expect_cert
    return DemoResult(report.name, report, [(f"Out-component within radius {RADIUS}", ok, res)])


def entrymod_duplicates(seed: int = 0) -> DemoResult:
    """Indices agree between Entry and its equivalent presentation Entrymod."""
    checks = []
    reports = {}
    for name in ("entry", "entrymod"):
        reports[name] = analyze(corpus.load(name), AnalysisOptions(seed=seed, name=name))
    idx = {
        name: {tuple(c.payoffs): c.index for c in r.components if c.payoffs is not None} for name, r in reports.items()
    }
    for pay, v in sorted(idx["entry"].items()):
        w = idx["entrymod"].get(pay)
        checks.append((f"component paying ({pay[0]}, {pay[1]})", v == w, (v, w)))
    return DemoResult("entrymod-duplicates", reports["entrymod"], checks)


def run_demo(name: str, epsilon=None, seed: int = 0) -> DemoResult:
    if name == "entry-embedding":
        return entry_embedding(Fraction(1, 100) if epsilon is None else epsilon, seed)
    if name == "entrymod-duplicates":
        return entrymod_duplicates(seed)
    raise KeyError(f"unknown demo {name!r}; choose from {', '.join(corpus.DEMOS)}")
