"""Acceptance criteria, exact comparisons throughout.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; either
way the terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

import helpers as h
import oracles
from hyperindex import corpus
from hyperindex.equilibria import enumerate_extreme_equilibria, equilibrium_components
from hyperindex.exactcore import EQ, LE, LinearProgram, lp_solve
from hyperindex.excluded import supporting_polytope
from hyperindex.gametree import BehaviorStrategy, mixed_to_behavior, normal_form, outcome_of, pure_behavior
from hyperindex.index import IndexSolver, NotRegular, check_duplication_invariance, shapley_index
from hyperindex.normalform import BimatrixGame, row_payoffs
from hyperindex.perturblab import (
    Certified,
    CounterexampleEquilibrium,
    build_embedding,
    component_image,
    verify_no_equilibrium_near,
)
from hyperindex.report import AnalysisOptions, analyze, verdict

criterion = pytest.mark.criterion


def _eqset(game: BimatrixGame) -> set:
    return {(e.x, e.y) for e in enumerate_extreme_equilibria(game)}


def _oracle(game: BimatrixGame) -> set:
    return oracles.extreme_equilibria([list(r) for r in game.A], [list(r) for r in game.B])


def _vec(labels, mix) -> tuple:
    return tuple(F(mix.get(l, 0)) for l in labels)


def _factor(name, payoff, player):
    rep = h.factorized(name, h.by_payoff(name, payoff)[0])
    return rep, rep.player_factors[player - 1]


# 1 ---------------------------------------------------------------------------


@criterion("1", "Entry: two components, indices +1/0, supporting polytope and its equilibria, verdicts")
def test_entry():
    comps = h.components("entry")
    assert len(comps) == 2
    strict, out = h.by_payoff("entry", (3, 1)), h.by_payoff("entry", (2, 2))
    assert len(strict) == 1 and len(out) == 1
    idx = h.indices("entry")
    assert idx[strict[0]] == 1 and idx[out[0]] == 0

    rep, pf = _factor("entry", (2, 2), 1)
    eg = pf.excluded
    assert eg.game.row_labels == ("In-L", "In-R") and eg.game.col_labels == ("l", "r")
    poly = supporting_polytope(eg).polytope
    # player 1 is unrestricted; on player 2's simplex the polytope is beta_l <= 2/3
    rows = [(list(c), LE, b) for c, b, _ in poly.inequalities] + [([1, 1], EQ, 1)]
    top = lp_solve(LinearProgram.build([1, 0], rows, maximize=True))
    low = lp_solve(LinearProgram.build([1, 0], rows, maximize=False))
    assert top.value == F(2, 3) and low.value == 0
    assert poly.contains((F(2, 3), F(1, 3))) and not poly.contains((F(2, 3) + F(1, 10**9), F(1, 3) - F(1, 10**9)))
    inside = {(x, y, v) for x, y, v in pf.detail.inside}
    assert pf.detail.simplified.row_labels == ("In-L", "In-R")
    assert inside == {((0, 1), (0, 1), 1), ((F(3, 4), F(1, 4)), (F(1, 4), F(3, 4)), -1)}
    assert pf.value == 0

    report = analyze(h.tree("entry"), AnalysisOptions(name="entry"))
    assert verdict(report.component(strict[0])) == "hyperstable"
    assert verdict(report.component(out[0])) == "not hyperstable"
    assert rep.verdict == "not hyperstable"
    assert h.factorized("entry", strict[0]).verdict == "hyperstable"


# 2 ---------------------------------------------------------------------------

FIG6_LIST = [
    ({"A": 1}, {"A": 1}, 1),
    ({"B": 1}, {"B": 1}, 1),
    ({"C": 1}, {"C": 1}, 1),
    ({"A": F(1, 5), "B": F(4, 5)}, {"A": F(3, 7), "B": F(4, 7)}, -1),
    ({"A": F(1, 5), "C": F(4, 5)}, {"A": F(1, 3), "C": F(2, 3)}, -1),
    ({"B": F(3, 4), "C": F(1, 4)}, {"B": F(1, 4), "C": F(3, 4)}, -1),
    ({"A": F(1, 17), "B": F(12, 17), "C": F(4, 17)}, {"A": F(3, 13), "B": F(4, 13), "C": F(6, 13)}, 1),
]


@criterion("2", "Figure 6 stage game: seven equilibria as listed, indices (+1,+1,+1,-1,-1,-1,+1)")
def test_fig6_stage():
    g = h.plan_form("stage_fig6").game
    comps = h.components("stage_fig6")
    idx = h.indices("stage_fig6")
    listed = [(_vec(g.row_labels, x), _vec(g.col_labels, y)) for x, y, _ in FIG6_LIST]
    found = [(e.x, e.y) for c in comps for e in c.extremes]
    assert len(comps) == 7 and len(found) == 7
    assert set(found) == set(listed)
    got = []
    for x, y in listed:
        (c,) = [c for c in comps if c.contains(x, y)]
        got.append(idx[c.id])
    assert got == [v for _, _, v in FIG6_LIST]
    assert sum(got) == 1


# 3 ---------------------------------------------------------------------------


@criterion("3", "Repeated Figure 6 (eps = 1/100): factors -1, +1, 0; product 0; not hyperstable")
def test_repeated_fig6():
    rep = h.repeated_fig6_report(F(1, 100))
    assert rep.payoffs == (6, 6)
    assert rep.factors == (-1, 1, 0)
    assert rep.player_factors[0].value == -1 and rep.player_factors[1].value == 0
    assert rep.product == 0 and rep.hyperstable is False
    assert rep.verdict == "not hyperstable"


# 4 ---------------------------------------------------------------------------


def _first_stage_mixed(Q) -> bool:
    cells = {"/T/L", "/T/R", "/B/L", "/B/R"}
    mass = {c: F(0) for c in cells}
    for z, p in Q.probs:
        mass["/" + "/".join(z.split("/")[1:3])] += p
    return all(mass.values())


@criterion("4", "Repeated Figure 8: 8,2 and 2,8 index 0; both 5,5 components +1 and hyperstable; mixed first stage nonzero")
def test_repeated_fig8():
    name = "repeated_fig8"
    idx = h.indices(name)
    for pay in ((8, 2), (2, 8)):
        (cid,) = h.by_payoff(name, pay)
        assert idx[cid] == 0
    alternation = h.by_payoff(name, (5, 5))
    assert len(alternation) == 2
    for cid in alternation:
        assert idx[cid] == 1
        rep = h.factorized(name, cid)
        assert rep.product == 1 and rep.hyperstable and rep.verdict == "hyperstable"
    mixed = [c.id for c in h.components(name) if _first_stage_mixed(h.outcome(name, c.id))]
    assert mixed
    assert all(idx[cid] != 0 for cid in mixed)


# 5 ---------------------------------------------------------------------------

FIG9 = {
    "BQ": ((3, F(9, 10)), (F(6, 5), 0)),
    "QB": ((2, F(9, 10)), (F(9, 5), 1)),
    "BB": ((F(29, 10), F(9, 10)), (F(9, 10), F(1, 10))),
}


@criterion("5", "Beer-Quiche: Figure 9 table, its three equilibria, polytope index 0, QQ not hyperstable, BB +1")
def test_beer_quiche():
    name = "beer_quiche"
    rep, pf = _factor(name, (F(21, 10), F(9, 10)), 1)
    g = pf.excluded.game
    assert g.col_labels == ("NF", "F")
    assert set(g.row_labels) == set(FIG9)
    table = {r: tuple(g.pair(i, j) for j in range(2)) for i, r in enumerate(g.row_labels)}
    assert table == FIG9
    assert pf.excluded.on_path_payoff == F(21, 10)

    listed = {
        (_vec(g.row_labels, {"BQ": 1}), _vec(g.col_labels, {"NF": 1})),
        (_vec(g.row_labels, {"QB": 1}), _vec(g.col_labels, {"F": 1})),
        (_vec(g.row_labels, {"BQ": F(1, 10), "QB": F(9, 10)}), _vec(g.col_labels, {"NF": F(3, 8), "F": F(5, 8)})),
    }
    assert _eqset(g) == listed == _oracle(g)
    pays = sorted(sum(x[i] * row_payoffs(g, y)[i] for i in range(3)) for x, y in listed)
    assert pays == [F(9, 5), F(15, 8), 3]

    assert pf.value == 0
    assert rep.product == 0 and rep.verdict == "not hyperstable"
    (bb,) = h.by_payoff(name, (F(29, 10), F(9, 10)))
    assert h.indices(name)[bb] == 1


# 6 ---------------------------------------------------------------------------


@criterion("6", "Cho-Kreps Figure IV: unique excluded equilibrium (mm, r2) outside the polytope; m'm' index 0")
def test_chokreps():
    name = "chokreps_figIV"
    rep, pf = _factor(name, (0, 0), 1)
    g = pf.excluded.game
    eq = {(_vec(g.row_labels, {"mm": 1}), _vec(g.col_labels, {"r2": 1}))}
    assert _eqset(g) == eq == _oracle(g)
    (x, y), = eq
    assert row_payoffs(g, y)[g.row_labels.index("mm")] == 1 > pf.excluded.on_path_payoff == 0
    assert not supporting_polytope(pf.excluded).contains(y)
    assert pf.value == 0 and pf.detail.inside == ()
    (cid,) = h.by_payoff(name, (0, 0))
    assert h.indices(name)[cid] == 0 and rep.product == 0


# 7 ---------------------------------------------------------------------------

# derived with the brute-force oracle before the build
THREE_TYPES_INSIDE = {
    ("m'm'm", "m'mm'", "mm'm'"): [
        ((F(2, 3), F(1, 3), 0), (0, F(1, 2), F(1, 2)), 1),
        ((F(1, 2), F(1, 4), F(1, 4)), (F(1, 3), F(1, 3), F(1, 3)), -1),
    ]
}


@criterion("7", "Three types: exactly two equilibria inside the polytope, Shapley indices +1 and -1, index 0")
def test_three_types():
    name = "three_types"
    rep, pf = _factor(name, (0, 0), 1)
    g = pf.excluded.game
    poly = supporting_polytope(pf.excluded)
    (rows, expected), = THREE_TYPES_INSIDE.items()
    frozen = {(_vec(g.row_labels, dict(zip(rows, x))), tuple(F(v) for v in y)) for x, y, _ in expected}
    inside = {(x, y) for x, y in _oracle(g) if poly.contains(y)}
    assert inside == frozen
    assert {(x, y) for x, y in _eqset(g) if poly.contains(y)} == frozen
    small = pf.detail.simplified
    assert small.row_labels == rows
    signs = sorted(shapley_index(small, (tuple(F(v) for v in x), tuple(F(v) for v in y))) for x, y, _ in expected)
    assert signs == [-1, 1]
    assert sorted(v for _, _, v in pf.detail.inside) == [-1, 1]
    assert pf.value == 0 and rep.product == 0


# 8 ---------------------------------------------------------------------------


@criterion("8", "Figure 3: A.2 fails with witness (B, la) paying exactly G1(Q) = 1")
def test_fig3():
    (cid,) = h.by_payoff("game-fig3", (1, 0))
    rep = h.factorized("game-fig3", cid)
    a2 = next(d for d in rep.diagnostics if d.name == "A2")
    assert not a2.passed
    assert (1, {"B": 1}, {"la": 1}, 1) in a2.witnesses
    assert rep.product is None and "A2" in rep.verdict


# 9 ---------------------------------------------------------------------------

RANDOM = h.random_games(50, seed=20261016)


def _all_games():
    for name in h.SMALL_GAMES:
        yield name, h.plan_form(name).game, list(h.components(name))
    for k, g in enumerate(RANDOM):
        yield f"random{k}", g, equilibrium_components(g)


@criterion("9a", "Property: component indices sum to +1 (corpus and 50 random games)")
def test_index_sum():
    for name, g, comps in _all_games():
        total = sum(r.value for r in IndexSolver(g, comps).all_indices().values())
        assert total == 1, name


@criterion("9b", "Property: Shapley index invariant under 100 random per-player payoff shifts")
def test_shift_invariance():
    rng = random.Random(9)
    checked = 0
    for name, g, comps in _all_games():
        regular = []
        for c in comps:
            if c.is_singleton():
                try:
                    regular.append((c.extremes[0], shapley_index(g, c.extremes[0])))
                except NotRegular:
                    pass
        if not regular:
            continue
        for _ in range(100):
            a, b = F(rng.randint(-1000, 1000), rng.randint(1, 50)), F(rng.randint(-1000, 1000), rng.randint(1, 50))
            shifted = BimatrixGame(
                g.row_labels,
                g.col_labels,
                tuple(tuple(v + a for v in r) for r in g.A),
                tuple(tuple(v + b for v in r) for r in g.B),
            )
            for e, v in regular:
                assert shapley_index(shifted, e) == v, name
                checked += 1
    assert checked > 1000


@criterion("9c", "Property: index methods agree whenever two or more resolve")
def test_method_agreement():
    multi = 0
    for name, g, comps in _all_games():
        for r in IndexSolver(g, comps, cross_check=True).all_indices().values():
            assert len({v for _, v in r.by_method}) == 1, name
            multi += len(r.by_method) >= 2
    assert multi > 100


@criterion("9d", "Property: indices invariant under three random duplicates per game")
def test_duplicate_invariance():
    for name, g, comps in _all_games():
        rng = random.Random(name)
        dups = []
        for _ in range(3):
            p = rng.choice((1, 2))
            labels = g.labels(p)
            dups.append((p, dict(zip(labels, h.distribution(rng, len(labels))))))
        for c in comps:
            assert check_duplication_invariance(g, c, dups, comps=comps), (name, c.id)


@criterion("9e", "Property: extreme equilibria equal the brute-force oracle up to 4x4")
def test_oracle_equivalence():
    count = 0
    for name, g, comps in _all_games():
        if max(g.shape) > 4:
            continue
        assert {(e.x, e.y) for c in comps for e in c.extremes} == _oracle(g), name
        count += 1
    assert count >= 55


def _random_behavior(rng, tree, player) -> BehaviorStrategy:
    return BehaviorStrategy.of(
        player, {u: dict(zip(info.actions, h.distribution(rng, len(info.actions)))) for u, info in tree.infosets[player].items()}
    )


@criterion("9f", "Property: Kuhn round trip on 10 random mixed/behavior pairs per tree")
def test_kuhn_round_trip():
    rng = random.Random(6)
    trees = [(n, h.tree(n), h.plan_form(n)) for n in h.SMALL_GAMES]
    t6, nf6, _ = h.repeated_fig6(F(1, 100))
    trees.append(("repeated_fig6", t6, nf6))
    for name, tree, nf in trees:
        for k in range(10):
            player = 1 + k % 2
            strategies = nf.strategies[player - 1]
            support = rng.sample(strategies, min(3, len(strategies)))
            mixed = dict(zip(support, h.distribution(rng, len(support))))
            other = _random_behavior(rng, tree, 3 - player)

            def run(b):
                return outcome_of(tree, (b, other) if player == 1 else (other, b)).as_dict()

            lhs = run(mixed_to_behavior(tree, player, mixed))
            rhs: dict = {}
            for s, w in mixed.items():
                for z, p in run(pure_behavior(tree, s)).items():
                    rhs[z] = rhs.get(z, 0) + w * p
            assert {z: p for z, p in lhs.items() if p} == {z: p for z, p in rhs.items() if p}, name


# 10 --------------------------------------------------------------------------

RADIUS = F(1, 10)


def _embedding_result(eps):
    spec = corpus.entry_embedding_spec(eps)
    emb = build_embedding(spec)
    nf = normal_form(emb.tree, plans=True)
    base_comps = equilibrium_components(spec.base_nf.game)
    out_comp = next(c for c in base_comps if c.extremes[0].payoffs == (2, 2))
    return verify_no_equilibrium_near(emb.tree, component_image(emb, out_comp, nf), RADIUS, nf)


@criterion("10", "Embedding demo: certified at eps in {1/100, 1/50, 1/10}; counterexample at eps = 0")
def test_embedding():
    for eps in (F(1, 100), F(1, 50), F(1, 10)):
        res = _embedding_result(eps)
        assert isinstance(res, Certified), eps
        assert res.nearest > RADIUS
    res = _embedding_result(F(0))
    assert isinstance(res, CounterexampleEquilibrium)
    assert res.distance <= RADIUS


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
