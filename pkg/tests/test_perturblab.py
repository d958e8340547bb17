from fractions import Fraction as F

import pytest

import helpers as h
from hyperindex import corpus
from hyperindex.equilibria import equilibrium_components
from hyperindex.gametree import Chance, normal_form
from hyperindex.normalform import reduce
from hyperindex.perturblab import (
    Certified,
    CounterexampleEquilibrium,
    EmbeddingSpec,
    MalformedEquivalence,
    build_embedding,
    component_image,
    verify_no_equilibrium_near,
)

RADIUS = F(1, 10)


def embedded(eps):
    emb = build_embedding(corpus.entry_embedding_spec(eps))
    return emb, normal_form(emb.tree, plans=True)


def image_of(emb, nf, payoffs):
    comps = equilibrium_components(emb.spec.base_nf.game)
    comp = next(c for c in comps if c.extremes[0].payoffs == payoffs)
    return component_image(emb, comp, nf)


def test_zero_epsilon_is_equivalent_to_entry():
    _, nf = embedded(F(0))
    red, _ = reduce(nf.game)
    base, _ = reduce(h.plan_form("entry").game)
    rename = {"Out": "Out", "L'": "In-L", "R'": "In-R"}
    assert tuple(rename[l] for l in red.row_labels) == base.row_labels
    assert red.col_labels == base.col_labels and red.A == base.A and red.B == base.B


def test_small_epsilon_chance_move():
    emb, nf = embedded(F(1, 100))
    root = emb.tree.root
    assert isinstance(root, Chance) and [p for p, _ in root.branches] == [F(99, 100), F(1, 100)]
    assert emb.kappa1_actions == ("Out", "L'", "R'") and emb.kappa2_actions == ("L'", "R'")
    assert nf.game.shape == (6, 2)


def test_full_epsilon_is_the_perturbed_game():
    emb, nf = embedded(F(1))
    assert emb.kappa1_actions == ()
    g = nf.game
    p = corpus.PERTURBED_ENTRY_SUBGAME
    assert g.row_labels == p.row_labels and g.A == p.A and g.B == p.B
    lifted = {(e.x, e.y) for c in equilibrium_components(g) for e in c.extremes}
    assert lifted == {(e.x, e.y) for c in equilibrium_components(p) for e in c.extremes}


@pytest.mark.parametrize("eps", [F(1, 100), F(1, 50)])
def test_out_component_certified(eps):
    emb, nf = embedded(eps)
    res = verify_no_equilibrium_near(emb.tree, image_of(emb, nf, (2, 2)), RADIUS, nf)
    assert isinstance(res, Certified) and res.nearest > RADIUS


def test_strict_component_survives():
    emb, nf = embedded(F(1, 100))
    res = verify_no_equilibrium_near(emb.tree, image_of(emb, nf, (3, 1)), RADIUS, nf)
    assert isinstance(res, CounterexampleEquilibrium) and res.distance == 0


def test_out_component_survives_at_zero():
    emb, nf = embedded(F(0))
    res = verify_no_equilibrium_near(emb.tree, image_of(emb, nf, (2, 2)), RADIUS, nf)
    assert isinstance(res, CounterexampleEquilibrium) and res.distance == 0


def test_bad_radius():
    emb, nf = embedded(F(1, 100))
    with pytest.raises(ValueError):
        verify_no_equilibrium_near(emb.tree, image_of(emb, nf, (2, 2)), 0, nf)


def _spec(**kw):
    args = dict(
        base=h.tree("entry"),
        perturbed=corpus.PERTURBED_ENTRY_SUBGAME,
        row_map={"L'": {"In-L": 1}, "R'": {"In-R": 1}},
        col_map={"l": {"l": 1}, "r": {"r": 1}},
        epsilon=F(1, 100),
    )
    args.update(kw)
    return EmbeddingSpec(**args)


@pytest.mark.parametrize(
    "kw",
    [
        {"row_map": {"L'": {"In-L": F(1, 2)}, "R'": {"In-R": 1}}},
        {"row_map": {"L'": {"In-L": 2, "In-R": -1}, "R'": {"In-R": 1}}},
        {"row_map": {"L'": {"Out": 1}, "R'": {"In-R": 1}}, "deviations": ("In-L", "In-R")},
        {"col_map": {"l": {"x": 1}, "r": {"r": 1}}},
        {"deviations": ("In-Z",)},
    ],
)
def test_malformed_equivalence(kw):
    with pytest.raises(MalformedEquivalence):
        _spec(**kw)


@pytest.mark.parametrize("kw", [{"epsilon": F(-1, 10)}, {"epsilon": F(11, 10)}, {"penalty": 3}])
def test_bad_parameters(kw):
    with pytest.raises(ValueError):
        _spec(**kw)


def test_default_penalty_exceeds_payoffs():
    assert _spec().penalty == 4
