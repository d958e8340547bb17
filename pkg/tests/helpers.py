"""Cached corpus computations shared across test modules."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from hyperindex import corpus
from hyperindex.equilibria import equilibrium_components
from hyperindex.excluded import ComponentData, factorized_index, outcome_check
from hyperindex.gametree import expected_payoffs, normal_form
from hyperindex.index import IndexSolver
from hyperindex.normalform import BimatrixGame

F = Fraction
SMALL_GAMES = tuple(g for g in corpus.GAMES if g != "repeated_fig6")


@functools.lru_cache(maxsize=None)
def tree(name):
    return corpus.load(name)


@functools.lru_cache(maxsize=None)
def plan_form(name):
    return normal_form(tree(name), plans=True)


@functools.lru_cache(maxsize=None)
def components(name):
    return tuple(equilibrium_components(plan_form(name).game))


@functools.lru_cache(maxsize=None)
def indices(name):
    solver = IndexSolver(plan_form(name).game, list(components(name)))
    return {c.id: solver.index(c).value for c in components(name)}


@functools.lru_cache(maxsize=None)
def data(name, cid):
    nf = plan_form(name)
    comp = next(c for c in components(name) if c.id == cid)
    return ComponentData.from_component(nf, comp)


@functools.lru_cache(maxsize=None)
def outcome(name, cid):
    chk, _ = outcome_check(tree(name), data(name, cid))
    return chk.outcome if chk.unique else None


def by_payoff(name, payoff) -> list:
    """Component ids whose unique outcome pays ``payoff``."""
    out = []
    for c in components(name):
        Q = outcome(name, c.id)
        if Q is not None and expected_payoffs(tree(name), Q) == tuple(F(v) for v in payoff):
            out.append(c.id)
    return out


@functools.lru_cache(maxsize=None)
def factorized(name, cid):
    return factorized_index(tree(name), data(name, cid))


@functools.lru_cache(maxsize=None)
def repeated_fig6(epsilon):
    t = corpus.load("repeated_fig6", epsilon=epsilon)
    nf = normal_form(t, plans=True)
    rep = ComponentData.from_representative(nf, {"CACC": 1}, {"ACCA": 1}, "CA")
    return t, nf, rep


@functools.lru_cache(maxsize=None)
def repeated_fig6_report(epsilon):
    t, _, rep = repeated_fig6(epsilon)
    return factorized_index(t, rep)


def random_game(rng: random.Random, m: int, n: int, lo: int = -5, hi: int = 5, denom: int = 4) -> BimatrixGame:
    def v():
        return F(rng.randint(lo * denom, hi * denom), denom)

    return BimatrixGame.from_lists([[v() for _ in range(n)] for _ in range(m)], [[v() for _ in range(n)] for _ in range(m)])


def random_games(count: int = 50, seed: int = 20261016) -> list:
    """Half 3x3, half 4x4, seeded."""
    rng = random.Random(seed)
    return [random_game(rng, 3 + (k % 2), 3 + (k % 2)) for k in range(count)]


def distribution(rng: random.Random, k: int) -> tuple:
    w = [rng.randint(0, 6) for _ in range(k)]
    if not any(w):
        w[rng.randrange(k)] = 1
    s = sum(w)
    return tuple(F(a, s) for a in w)
