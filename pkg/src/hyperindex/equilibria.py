"""Extreme equilibria, maximal Nash subsets and components of a bimatrix game.

Extreme equilibria are completely labelled vertex pairs of the best-reply
polytopes ``P = {x >= 0 : B'^T x <= 1}`` and ``Q = {y >= 0 : A' y <= 1}``
with ``A', B'`` positive shifts of the payoffs. Maximal Nash subsets are the
maximal bicliques of the vertex pairs; components are connected unions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import dot, in_convex_hull, positive_polytope_vertices
from .gametree import GameTree, Outcome, TreeNormalForm, profile_outcome
from .normalform import BimatrixGame, MixedProfile, col_payoffs, row_payoffs


@dataclass(frozen=True)
class ExtremeEquilibrium:
    x: tuple
    y: tuple
    supports: tuple  # (row indices, column indices)
    payoffs: tuple

    @property
    def profile(self) -> MixedProfile:
        return MixedProfile(self.x, self.y)

    def sort_key(self):
        return (self.supports, self.x, self.y)


@dataclass(frozen=True)
class MaximalNashSubset:
    """``conv(xs) x conv(ys)``; every pair drawn from the hulls is an equilibrium."""

    xs: tuple
    ys: tuple

    def extremes(self) -> list:
        return [(x, y) for x in self.xs for y in self.ys]

    def contains(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
        return in_convex_hull(x, self.xs).inside and in_convex_hull(y, self.ys).inside


@dataclass(frozen=True)
class NashComponent:
    id: str
    subsets: tuple
    extremes: tuple  # ExtremeEquilibrium, sorted

    def contains(self, x, y) -> bool:
        return any(s.contains(x, y) for s in self.subsets)

    @property
    def x_vertices(self) -> tuple:
        return tuple(sorted({x for s in self.subsets for x in s.xs}))

    @property
    def y_vertices(self) -> tuple:
        return tuple(sorted({y for s in self.subsets for y in s.ys}))

    def barycenter(self) -> tuple:
        k = len(self.extremes)
        x = tuple(sum((e.x[i] for e in self.extremes), Fraction(0)) / k for i in range(len(self.extremes[0].x)))
        y = tuple(sum((e.y[j] for e in self.extremes), Fraction(0)) / k for j in range(len(self.extremes[0].y)))
        return x, y

    def is_singleton(self) -> bool:
        return len(self.extremes) == 1


def _shift(M: Sequence[Sequence[Fraction]]) -> list:
    lo = min(v for row in M for v in row)
    c = 1 - lo if lo <= 0 else Fraction(0)
    return [[v + c for v in row] for row in M]


def _labels_x(x, Bt, m, n) -> int:
    mask = 0
    for i, v in enumerate(x):
        if v == 0:
            mask |= 1 << i
    for j, row in enumerate(Bt):
        if dot(row, x) == 1:
            mask |= 1 << (m + j)
    return mask


def _labels_y(y, A, m, n) -> int:
    mask = 0
    for j, v in enumerate(y):
        if v == 0:
            mask |= 1 << (m + j)
    for i, row in enumerate(A):
        if dot(row, y) == 1:
            mask |= 1 << i
    return mask


def _normalize(v: Sequence[Fraction]) -> tuple:
    s = sum(v)
    return tuple(a / s for a in v)


def is_equilibrium(game: BimatrixGame, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Direct best-reply check."""
    rp = row_payoffs(game, y)
    cp = col_payoffs(game, x)
    return dot(x, rp) == max(rp) and dot(y, cp) == max(cp)


def enumerate_extreme_equilibria(game: BimatrixGame) -> list:
    m, n = game.shape
    A = _shift(game.A)
    B = _shift(game.B)
    Bt = [list(col) for col in zip(*B)]
    P = [v for v in positive_polytope_vertices(Bt) if any(v)]
    Q = [v for v in positive_polytope_vertices(A) if any(v)]
    full = (1 << (m + n)) - 1
    qmasks: dict[int, list] = {}
    for y in Q:
        qmasks.setdefault(_labels_y(y, A, m, n), []).append(y)
    out = []
    for x in P:
        need = full & ~_labels_x(x, Bt, m, n)
        for mask, ys in qmasks.items():
            if mask & need == need:
                for y in ys:
                    xn, yn = _normalize(x), _normalize(y)
                    sx = tuple(i for i, v in enumerate(xn) if v)
                    sy = tuple(j for j, v in enumerate(yn) if v)
                    pay = (dot(xn, row_payoffs(game, yn)), dot(yn, col_payoffs(game, xn)))
                    out.append(ExtremeEquilibrium(xn, yn, (sx, sy), pay))
    out.sort(key=ExtremeEquilibrium.sort_key)
    return out


def maximal_nash_subsets(game: BimatrixGame, extremes: Sequence[ExtremeEquilibrium]) -> list:
    """Maximal bicliques of the vertex-pair graph (Galois-closed pairs)."""
    xs = sorted({e.x for e in extremes})
    ys = sorted({e.y for e in extremes})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: j for j, y in enumerate(ys)}
    nbr = [0] * len(xs)
    for e in extremes:
        nbr[xi[e.x]] |= 1 << yi[e.y]
    family = set()
    frontier = {b for b in nbr if b}
    while frontier:
        family |= frontier
        new = set()
        for a in frontier:
            for b in family:
                c = a & b
                if c and c not in family:
                    new.add(c)
        frontier = new
    subsets = []
    for ymask in family:
        xset = tuple(x for x, b in zip(xs, nbr) if b & ymask == ymask)
        yset = tuple(y for j, y in enumerate(ys) if ymask >> j & 1)
        subsets.append(MaximalNashSubset(xset, yset))
    subsets.sort(key=lambda s: (s.xs, s.ys))
    return subsets


def components(subsets: Sequence[MaximalNashSubset], extremes: Sequence[ExtremeEquilibrium] = ()) -> list:
    """Connected unions; two subsets meet iff they share an x- and a y-vertex."""
    parent = list(range(len(subsets)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(subsets)):
        for j in range(i + 1, len(subsets)):
            if set(subsets[i].xs) & set(subsets[j].xs) and set(subsets[i].ys) & set(subsets[j].ys):
                parent[find(i)] = find(j)
    groups: dict[int, list] = {}
    for i in range(len(subsets)):
        groups.setdefault(find(i), []).append(subsets[i])
    by_pair = {(e.x, e.y): e for e in extremes}
    built = []
    for subs in groups.values():
        pairs = {(x, y) for s in subs for x in s.xs for y in s.ys}
        ex = [by_pair[p] for p in pairs if p in by_pair] if by_pair else []
        if not ex:
            ex = [_make_extreme(x, y) for x, y in pairs]
        ex.sort(key=ExtremeEquilibrium.sort_key)
        built.append((ex, subs))
    built.sort(key=lambda t: t[0][0].sort_key())
    return [NashComponent(f"K{k}", tuple(subs), tuple(ex)) for k, (ex, subs) in enumerate(built, start=1)]


def _make_extreme(x, y) -> ExtremeEquilibrium:
    sx = tuple(i for i, v in enumerate(x) if v)
    sy = tuple(j for j, v in enumerate(y) if v)
    return ExtremeEquilibrium(x, y, (sx, sy), ())


def equilibrium_components(game: BimatrixGame) -> list:
    """Enumerate, assemble subsets and return the components."""
    ex = enumerate_extreme_equilibria(game)
    return components(maximal_nash_subsets(game, ex), ex)


def component_of(comps: Sequence[NashComponent], x, y) -> NashComponent | None:
    for c in comps:
        if c.contains(x, y):
            return c
    return None


@dataclass(frozen=True)
class OutcomeCheck:
    unique: bool
    outcome: Outcome | None = None
    witness: tuple | None = None  # two extreme equilibria with different outcomes


def component_outcome(tree: GameTree, nf: TreeNormalForm, component: NashComponent) -> OutcomeCheck:
    labels = (tuple(s.label for s in nf.strategies[0]), tuple(s.label for s in nf.strategies[1]))
    if labels != (nf.game.row_labels, nf.game.col_labels):
        raise ValueError("normal form labels do not match its strategies")
    if len(component.extremes[0].x) != len(labels[0]) or len(component.extremes[0].y) != len(labels[1]):
        raise ValueError("component lives in a different game")
    first = component.extremes[0]
    base = profile_outcome(tree, nf, first.x, first.y)
    for e in component.extremes[1:]:
        o = profile_outcome(tree, nf, e.x, e.y)
        if o != base:
            return OutcomeCheck(False, None, (first, e))
    return OutcomeCheck(True, base)
