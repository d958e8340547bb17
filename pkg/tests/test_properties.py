"""Cross-module invariants over the corpus."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers as h
from hyperindex.excluded import (
    combine_split,
    excluded_game,
    kuhn_split,
    observable_deviations,
    on_off_partition,
    supporting_polytope,
)
from hyperindex.exactcore import dot
from hyperindex.gametree import BehaviorStrategy, mixed_to_behavior, outcome_of
from hyperindex.report import AnalysisOptions, analyze


def _with_outcome(name):
    return [(c, h.outcome(name, c.id)) for c in h.components(name) if h.outcome(name, c.id) is not None]


def _excluded(name):
    t, nf = h.tree(name), h.plan_form(name)
    out = []
    for c, Q in _with_outcome(name):
        part = on_off_partition(t, Q)
        devs = observable_deviations(t, part, nf)
        out += [excluded_game(t, part, Q, p, devs[p - 1]) for p in (1, 2) if devs[p - 1]]
    return out


@pytest.mark.parametrize("name", h.SMALL_GAMES)
def test_polytope_membership_is_direct_check(name):
    rng = random.Random(name)
    for eg in _excluded(name):
        sp = supporting_polytope(eg)
        n = len(eg.game.col_labels)
        for _ in range(100):
            sigma = h.distribution(rng, n)
            direct = all(dot(row, sigma) <= eg.on_path_payoff for row in eg.game.A)
            assert sp.contains(sigma) == direct


def _random_behavior(rng, tree, player):
    return BehaviorStrategy.of(
        player, {u: dict(zip(i.actions, h.distribution(rng, len(i.actions)))) for u, i in tree.infosets[player].items()}
    )


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(h.SMALL_GAMES), st.integers(1, 2), st.integers(0, 10**6))
def test_kuhn_split_round_trip(name, player, seed):
    t, nf = h.tree(name), h.plan_form(name)
    comps = _with_outcome(name)
    rng = random.Random(seed)
    _, Q = rng.choice(comps)
    part = on_off_partition(t, Q)
    strats = nf.strategies[player - 1]
    k = rng.randint(1, min(4, len(strats)))
    mixed = dict(zip(rng.sample(strats, k), h.distribution(rng, k)))
    plus, zero = kuhn_split(t, part, player, mixed)
    prod = combine_split(t, player, plus, zero)
    orig = mixed_to_behavior(t, player, mixed)
    other = _random_behavior(rng, t, 3 - player)
    pair = (prod, other) if player == 1 else (other, prod)
    ref = (orig, other) if player == 1 else (other, orig)
    assert outcome_of(t, pair) == outcome_of(t, ref)


@pytest.mark.parametrize("name", h.SMALL_GAMES)
def test_no_deviations_means_full_support(name):
    t, nf = h.tree(name), h.plan_form(name)
    for c, Q in _with_outcome(name):
        part = on_off_partition(t, Q)
        if observable_deviations(t, part, nf) == ((), ()):
            assert all(p for _, p in Q.probs)
            assert h.indices(name)[c.id] != 0


@pytest.mark.parametrize("name", h.SMALL_GAMES)
def test_empty_deviation_set_gives_unit_factor(name):
    t, nf = h.tree(name), h.plan_form(name)
    for c, Q in _with_outcome(name):
        devs = observable_deviations(t, on_off_partition(t, Q), nf)
        r = h.factorized(name, c.id)
        for p in (1, 2):
            pf = next((f for f in r.player_factors if f.player == p), None)
            if pf is not None and not devs[p - 1]:
                assert pf.value == 1 and pf.excluded is None and not pf.has_excluded_game


@pytest.mark.parametrize("name", h.SMALL_GAMES)
def test_report_index_sum(name):
    rep = analyze(h.tree(name), AnalysisOptions(name=name))
    assert sum(c.index for c in rep.components) == 1
