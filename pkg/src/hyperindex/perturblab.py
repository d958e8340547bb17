"""Nature-embedding of a perturbed excluded game and a certificate that no
equilibrium of the embedded game lies near a target component.

Nature picks ``k1`` (probability ``1 - eps``) or ``k2`` (``eps``). After ``k1``
player 1 plays a non-deviation or one of the duplicates; after ``k2`` only a
duplicate, facing the perturbed game. Player 2 sees nothing and chooses from
the base strategies plus the column duplicates. Player 1 is the deviator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .equilibria import NashComponent, equilibrium_components
from .exactcore import EQ, GE, LE, LinearProgram, lp_solve, rat
from .gametree import Chance, Decision, GameTree, Terminal, TreeNormalForm, normal_form
from .normalform import BimatrixGame

KAPPA1, KAPPA2 = "k1", "k2"


class MalformedEquivalence(ValueError):
    pass


def _weights(mix: Mapping) -> dict:
    out = {l: rat(w) for l, w in mix.items() if rat(w)}
    if any(w < 0 for w in out.values()) or sum(out.values()) != 1:
        raise MalformedEquivalence(f"duplicate weights {mix!r} are not a probability vector")
    return out


def _point(mix: Mapping):
    return next(iter(mix)) if len(mix) == 1 else None


@dataclass(frozen=True)
class EmbeddingSpec:
    """``row_map``/``col_map`` send each perturbed-game strategy to the base
    plan-form mixture it duplicates. Deviations default to the row supports.
    """

    base: GameTree
    perturbed: BimatrixGame
    row_map: Mapping
    col_map: Mapping
    epsilon: Fraction
    penalty: Fraction | None = None
    deviations: tuple | None = None
    base_nf: TreeNormalForm = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        eps = rat(self.epsilon)
        if not 0 <= eps <= 1:
            raise ValueError("epsilon must lie in [0, 1]")
        object.__setattr__(self, "epsilon", eps)
        nf = self.base_nf or normal_form(self.base, plans=True)
        object.__setattr__(self, "base_nf", nf)
        rows = {l: _weights(self.row_map.get(l, {})) for l in self.perturbed.row_labels}
        cols = {l: _weights(self.col_map.get(l, {})) for l in self.perturbed.col_labels}
        devs = tuple(self.deviations) if self.deviations is not None else tuple(
            l for l in nf.game.row_labels if any(l in m for m in rows.values())
        )
        if set(devs) - set(nf.game.row_labels):
            raise MalformedEquivalence(f"unknown deviations {sorted(set(devs) - set(nf.game.row_labels))}")
        for r, m in rows.items():
            if set(m) - set(devs):
                raise MalformedEquivalence(f"duplicate {r!r} mixes strategies outside the deviations")
        for c, m in cols.items():
            if set(m) - set(nf.game.col_labels):
                raise MalformedEquivalence(f"duplicate {c!r} mixes unknown strategies")
        object.__setattr__(self, "row_map", rows)
        object.__setattr__(self, "col_map", cols)
        object.__setattr__(self, "deviations", devs)
        if self.penalty is None:
            object.__setattr__(self, "penalty", 1 + max(abs(v) for v in self.perturbed.payoff_entries()))
        else:
            pen = rat(self.penalty)
            if pen <= max(abs(v) for v in self.perturbed.payoff_entries()):
                raise ValueError("penalty must exceed every perturbed payoff in magnitude")
            object.__setattr__(self, "penalty", pen)


@dataclass(frozen=True)
class Embedding:
    tree: GameTree
    spec: EmbeddingSpec
    kappa1_actions: tuple  # player 1's choices after k1
    kappa2_actions: tuple
    player2_actions: tuple
    column_of: Mapping  # player-2 action -> perturbed column, when it is a duplicate


def build_embedding(spec: EmbeddingSpec) -> Embedding:
    g = spec.base_nf.game
    devs = set(spec.deviations)
    dup_rows = spec.perturbed.row_labels
    k1_actions = tuple(l for l in g.row_labels if l not in devs) + dup_rows
    if len(set(k1_actions)) != len(k1_actions):
        raise MalformedEquivalence("duplicate labels collide with base strategies")

    p2_actions = list(g.col_labels)
    column_of: dict = {}
    p2_mix = {l: {l: Fraction(1)} for l in g.col_labels}
    for c in spec.perturbed.col_labels:
        m = spec.col_map[c]
        t = _point(m)
        if t is not None and t not in column_of:
            column_of[t] = c  # same strategy as a base one: no penalty
            continue
        label = c
        while label in p2_actions:
            label += "#dup"
        p2_actions.append(label)
        column_of[label] = c
        p2_mix[label] = m
    row_mix = {l: {l: Fraction(1)} for l in g.row_labels if l not in devs}
    row_mix.update(spec.row_map)

    ri = {l: i for i, l in enumerate(g.row_labels)}
    ci = {l: j for j, l in enumerate(g.col_labels)}

    def base_payoff(a, b) -> tuple:
        u = v = Fraction(0)
        for r, wr in row_mix[a].items():
            for c, wc in p2_mix[b].items():
                u += wr * wc * g.A[ri[r]][ci[c]]
                v += wr * wc * g.B[ri[r]][ci[c]]
        return u, v

    P = spec.perturbed
    pr = {l: i for i, l in enumerate(P.row_labels)}
    pc = {l: j for j, l in enumerate(P.col_labels)}

    def kappa2_payoff(a, b) -> tuple:
        if b in column_of:
            i, j = pr[a], pc[column_of[b]]
            return P.A[i][j], P.B[i][j]
        return Fraction(0), -spec.penalty

    def p2_node(pay) -> Decision:
        return Decision(2, "J", tuple((b, Terminal(pay(b))) for b in p2_actions))

    branches = []
    if spec.epsilon != 1:
        k1 = Decision(1, KAPPA1, tuple((a, p2_node(lambda b, a=a: base_payoff(a, b))) for a in k1_actions))
        branches.append((1 - spec.epsilon, k1))
    if spec.epsilon != 0:
        k2 = Decision(1, KAPPA2, tuple((a, p2_node(lambda b, a=a: kappa2_payoff(a, b))) for a in dup_rows))
        branches.append((spec.epsilon, k2))
    tree = GameTree(Chance(tuple(branches)))
    return Embedding(
        tree,
        spec,
        k1_actions if spec.epsilon != 1 else (),
        dup_rows if spec.epsilon != 0 else (),
        tuple(p2_actions),
        column_of,
    )


# ---------------------------------------------------------------------------
# Component images and certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentImage:
    """Union of products ``conv(xs) x conv(ys)`` over the embedded plan form."""

    subsets: tuple  # ((xs, ys), ...)


def component_image(emb: Embedding, component: NashComponent, nf: TreeNormalForm | None = None) -> ComponentImage:
    """Image of a base component; player 1's ``k2`` choice is left free.

    Deviations must have a point-mass duplicate to be representable.
    """
    nf = nf or normal_form(emb.tree, plans=True)
    base = emb.spec.base_nf.game
    devs = set(emb.spec.deviations)
    as_k1 = {l: l for l in base.row_labels if l not in devs}
    for r, m in emb.spec.row_map.items():
        t = _point(m)
        if t is not None:
            as_k1.setdefault(t, r)
    plans = [s.as_dict() for s in nf.strategies[0]]
    k2_choices = emb.kappa2_actions or (None,)

    def map_x(x) -> list:
        out = []
        for b in k2_choices:
            v = [Fraction(0)] * len(plans)
            for l, w in zip(base.row_labels, x):
                if not w:
                    continue
                if l not in as_k1:
                    raise ValueError(f"base strategy {l!r} has no exact duplicate in the embedding")
                for k, d in enumerate(plans):
                    if d.get(KAPPA1) == as_k1[l] and d.get(KAPPA2) == b:
                        v[k] += w
            out.append(tuple(v))
        return out

    cols = nf.game.col_labels

    def map_y(y) -> tuple:
        v = dict.fromkeys(cols, Fraction(0))
        for l, w in zip(base.col_labels, y):
            v[l] += w
        return tuple(v[c] for c in cols)

    subsets = []
    for s in component.subsets:
        xs = tuple(dict.fromkeys(p for x in s.xs for p in map_x(x)))
        ys = tuple(dict.fromkeys(map_y(y) for y in s.ys))
        subsets.append((xs, ys))
    return ComponentImage(tuple(subsets))


def _closest(P: Sequence, Q: Sequence) -> tuple:
    """l-infinity distance between two hulls and the nearest point of ``conv(P)``."""
    k1, k2, d = len(P), len(Q), len(P[0])
    rows = [([1] * k1 + [0] * k2 + [0], EQ, 1), ([0] * k1 + [1] * k2 + [0], EQ, 1)]
    for c in range(d):
        coeffs = [p[c] for p in P] + [-q[c] for q in Q]
        rows.append((coeffs + [-1], LE, 0))
        rows.append((coeffs + [1], GE, 0))
    res = lp_solve(LinearProgram.build([0] * (k1 + k2) + [1], rows, maximize=False))
    lam = res.point[:k1]
    point = tuple(sum((l * p[c] for l, p in zip(lam, P)), Fraction(0)) for c in range(d))
    return res.value, point


@dataclass(frozen=True)
class Certified:
    radius: Fraction
    nearest: Fraction  # smallest distance from any equilibrium to the image
    components_checked: int


@dataclass(frozen=True)
class CounterexampleEquilibrium:
    x: Mapping
    y: Mapping
    distance: Fraction


def verify_no_equilibrium_near(embedded: GameTree, image: ComponentImage, radius, nf: TreeNormalForm | None = None):
    """Enumerate every equilibrium and measure its distance to ``image``."""
    radius = rat(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    nf = nf or normal_form(embedded, plans=True)
    comps = equilibrium_components(nf.game)
    best = None
    for c in comps:
        for s in c.subsets:
            for ixs, iys in image.subsets:
                dx, px = _closest(s.xs, ixs)
                dy, py = _closest(s.ys, iys)
                d = max(dx, dy)
                if best is None or d < best[0]:
                    best = (d, px, py)
    if best is not None and best[0] <= radius:
        d, px, py = best
        g = nf.game
        return CounterexampleEquilibrium(
            {l: w for l, w in zip(g.row_labels, px) if w}, {l: w for l, w in zip(g.col_labels, py) if w}, d
        )
    return Certified(radius, best[0] if best else None, len(comps))
