"""Fixed-point indices of equilibrium components.

Four routes, cross-checked whenever more than one applies:

* ``shapley``     sign formula at an isolated regular equilibrium;
* ``complement``  indices over all components sum to one;
* ``elimination`` drop strictly inferior replies, reduce, recurse;
* ``perturbation`` sum Shapley indices of a nearby generic game's
  equilibria that fall close to the component.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactcore import (
    EQ,
    GE,
    LE,
    InequalityPolytope,
    LinearProgram,
    dot,
    lp_solve,
    matrix_det,
)
from .equilibria import (
    ExtremeEquilibrium,
    NashComponent,
    equilibrium_components,
)
from .normalform import (
    BimatrixGame,
    add_duplicates,
    col_payoffs,
    eliminate_strictly_inferior,
    perturb,
    reduce,
    row_payoffs,
)

SHAPLEY, COMPLEMENT, ELIMINATION, PERTURBATION = "shapley", "complement", "elimination", "perturbation"
METHODS = (SHAPLEY, COMPLEMENT, ELIMINATION, PERTURBATION)


class NotRegular(ValueError):
    pass


class Unresolvable(RuntimeError):
    pass


class MethodDisagreement(RuntimeError):
    pass


class ComponentStraddlesBoundary(ValueError):
    pass


# ---------------------------------------------------------------------------
# Shapley's formula
# ---------------------------------------------------------------------------


def _shift_const(M) -> Fraction:
    return 1 + max(Fraction(0), -min(v for row in M for v in row))


def regularity_failure(game: BimatrixGame, x, y) -> str | None:
    """Why ``(x, y)`` is not an isolated regular equilibrium, or None."""
    S = [i for i, v in enumerate(x) if v]
    T = [j for j, v in enumerate(y) if v]
    if len(S) != len(T):
        return f"support sizes differ ({len(S)} vs {len(T)})"
    rp, cp = row_payoffs(game, y), col_payoffs(game, x)
    v1, v2 = max(rp), max(cp)
    if any(rp[i] != v1 for i in S) or any(cp[j] != v2 for j in T):
        return "not an equilibrium"
    if any(rp[i] == v1 for i in range(len(rp)) if i not in S) or any(
        cp[j] == v2 for j in range(len(cp)) if j not in T
    ):
        return "an unused strategy is a best reply"
    return None


def shapley_index(game: BimatrixGame, eq, shifts: tuple | None = None) -> int:
    """``(-1)^(k+1) sign(det A_ST det B_ST)`` on positively shifted payoffs."""
    x, y = (eq.x, eq.y) if hasattr(eq, "x") else eq
    why = regularity_failure(game, x, y)
    if why:
        raise NotRegular(why)
    S = [i for i, v in enumerate(x) if v]
    T = [j for j, v in enumerate(y) if v]
    ca, cb = shifts if shifts is not None else (_shift_const(game.A), _shift_const(game.B))
    dA = matrix_det([[game.A[i][j] + ca for j in T] for i in S])
    dB = matrix_det([[game.B[i][j] + cb for j in T] for i in S])
    if dA == 0 or dB == 0:
        raise NotRegular("singular support matrix")
    k = len(S)
    sign = 1 if (dA > 0) == (dB > 0) else -1
    return sign if k % 2 == 1 else -sign


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def hull_distance(P: Sequence[Sequence[Fraction]], Q: Sequence[Sequence[Fraction]]) -> Fraction:
    """l-infinity distance between ``conv(P)`` and ``conv(Q)`` by LP."""
    k1, k2 = len(P), len(Q)
    d = len(P[0])
    nv = k1 + k2 + 1
    rows = [([1] * k1 + [0] * k2 + [0], EQ, 1), ([0] * k1 + [1] * k2 + [0], EQ, 1)]
    for c in range(d):
        coeffs = [p[c] for p in P] + [-q[c] for q in Q]
        rows.append((coeffs + [-1], LE, 0))
        rows.append((coeffs + [1], GE, 0))
    obj = [0] * (nv - 1) + [1]
    res = lp_solve(LinearProgram.build(obj, rows, maximize=False))
    return res.value


def subset_distance(a, b) -> Fraction:
    return max(hull_distance(a.xs, b.xs), hull_distance(a.ys, b.ys))


def component_distance(c1: NashComponent, c2: NashComponent) -> Fraction:
    return min(subset_distance(a, b) for a in c1.subsets for b in c2.subsets)


def point_component_distance(x, y, comp: NashComponent) -> Fraction:
    return min(max(hull_distance([x], s.xs), hull_distance([y], s.ys)) for s in comp.subsets)


def _box_gap(P, Q) -> Fraction:
    """Lower bound on the hull distance from coordinate ranges."""
    gap = Fraction(0)
    for c in range(len(P[0])):
        plo, phi = min(p[c] for p in P), max(p[c] for p in P)
        qlo, qhi = min(q[c] for q in Q), max(q[c] for q in Q)
        gap = max(gap, qlo - phi, plo - qhi)
    return gap


def _vertex_gap(p, Q) -> Fraction:
    """Upper bound on the distance from ``p`` to ``conv(Q)``."""
    return min(max(abs(a - b) for a, b in zip(p, q)) for q in Q)


def point_within(x, y, comp: NashComponent, radius: Fraction) -> bool:
    """``point_component_distance(x, y, comp) < radius``, with LPs only when the bounds are inconclusive."""
    for s in comp.subsets:
        if max(_box_gap([x], s.xs), _box_gap([y], s.ys)) >= radius:
            continue
        if max(_vertex_gap(x, s.xs), _vertex_gap(y, s.ys)) < radius:
            return True
        if max(hull_distance([x], s.xs), hull_distance([y], s.ys)) < radius:
            return True
    return False


# ---------------------------------------------------------------------------
# Component index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexResult:
    value: int
    method: str
    by_method: tuple  # ((method, value), ...)


def _min_gap(game: BimatrixGame) -> Fraction:
    gaps = []
    for M in (game.A, game.B):
        vals = sorted({v for row in M for v in row})
        gaps.extend(b - a for a, b in zip(vals, vals[1:]))
    return min(gaps) if gaps else Fraction(1)


def _map_into_reduced(comp: NashComponent, game: BimatrixGame, small: BimatrixGame, emap, kept) -> list:
    """Images in ``small`` of the component's extreme equilibria."""
    rows_kept, cols_kept = kept
    out = []
    for e in comp.extremes:
        x = [e.x[i] for i in rows_kept]
        y = [e.y[j] for j in cols_kept]
        lx = [game.row_labels[i] for i in rows_kept]
        ly = [game.col_labels[j] for j in cols_kept]
        out.append((emap.image(1, lx, x, small.row_labels), emap.image(2, ly, y, small.col_labels)))
    return out


class IndexSolver:
    """Indices of every component of one game, memoized."""

    def __init__(
        self,
        game: BimatrixGame,
        comps: Sequence[NashComponent] | None = None,
        seed: int = 0,
        cross_check: bool = False,
        max_draws: int = 12,
        perturbation: bool = True,
    ):
        self.game = game
        self.comps = list(comps) if comps is not None else equilibrium_components(game)
        self.seed = seed
        self.cross_check = cross_check
        self.max_draws = max_draws
        self.perturbation = perturbation
        self._cache: dict[str, IndexResult] = {}
        self._partial: dict[tuple, int | None] = {}
        self._draws: dict = {}

    # individual methods; None means "does not apply"

    def by_shapley(self, comp: NashComponent) -> int | None:
        if not comp.is_singleton():
            return None
        try:
            return shapley_index(self.game, comp.extremes[0])
        except NotRegular:
            return None

    def by_elimination(self, comp: NashComponent) -> int | None:
        key = (ELIMINATION, comp.id)
        if key in self._partial:
            return self._partial[key]
        self._partial[key] = None
        smaller, removed = eliminate_strictly_inferior(self.game, comp)
        reduced, emap = reduce(smaller)
        if reduced.shape == self.game.shape:
            return None
        kept = (
            [i for i, l in enumerate(self.game.row_labels) if l not in removed[0]],
            [j for j, l in enumerate(self.game.col_labels) if l not in removed[1]],
        )
        images = _map_into_reduced(comp, self.game, reduced, emap, kept)
        sub = IndexSolver(
            reduced, seed=self.seed, cross_check=self.cross_check, max_draws=self.max_draws, perturbation=self.perturbation
        )
        owners = {c.id for x, y in images for c in sub.comps if c.contains(x, y)}
        if len(owners) != 1:
            raise Unresolvable(f"component {comp.id} does not map to a single component after elimination")
        target = next(c for c in sub.comps if c.id in owners)
        value = sub.index(target).value
        self._partial[key] = value
        return value

    def by_complement(self, comp: NashComponent) -> int | None:
        total = 0
        for other in self.comps:
            if other.id == comp.id:
                continue
            v = self.by_shapley(other)
            if v is None:
                v = self.by_elimination(other)
            if v is None:
                return None
            total += v
        return 1 - total

    def perturbation_radius(self, comp: NashComponent) -> Fraction:
        others = [c for c in self.comps if c.id != comp.id]
        if not others:
            return Fraction(2)
        pairs = sorted(
            ((max(_box_gap(a.xs, b.xs), _box_gap(a.ys, b.ys)), k, a, b) for k, c in enumerate(others) for a in comp.subsets for b in c.subsets),
            key=lambda t: (t[0], t[1]),
        )
        best = None
        for lb, _, a, b in pairs:
            if best is not None and lb >= best:
                break
            d = subset_distance(a, b)
            best = d if best is None else min(best, d)
        return best / 2

    def by_perturbation(self, comp: NashComponent, delta: Fraction | None = None, seed: int | None = None) -> int | None:
        """Two successive draws (at delta and delta/2) must agree."""
        if len(self.comps) == 1:
            return 1
        rng = random.Random(self.seed if seed is None else seed)
        delta = delta if delta is not None else _min_gap(self.game) / 8
        radius = self.perturbation_radius(comp)
        previous = None
        for _ in range(self.max_draws):
            value = self._perturbed_count(comp, delta, radius, rng)
            if value is None:
                delta /= 2
                previous = None
                continue
            if previous is not None and value == previous:
                return value
            previous = value
            delta /= 2
        return None

    def _perturbed_count(self, comp, delta, radius, rng) -> int | None:
        m, n = self.game.shape
        den = 997

        def draw():
            return [[Fraction(rng.randint(-den, den), den) * delta for _ in range(n)] for _ in range(m)]

        dA, dB = draw(), draw()
        key = (tuple(map(tuple, dA)), tuple(map(tuple, dB)))
        if key not in self._draws:
            # draws repeat across components (same seed), so enumerate each once
            g = perturb(self.game, dA, dB)
            try:
                self._draws[key] = [(e.x, e.y, shapley_index(g, e)) for e in enumerate_generic(g)]
            except NotRegular:
                self._draws[key] = None
        found = self._draws[key]
        if found is None:
            return None
        total = 0
        for x, y, idx in found:
            near = [c for c in self.comps if point_within(x, y, c, radius)]
            if not near:
                return None
            if any(c.id == comp.id for c in near):
                total += idx
        return total

    def index(self, comp: NashComponent) -> IndexResult:
        if comp.id in self._cache:
            return self._cache[comp.id]
        found: list[tuple[str, int]] = []
        for method, fn in ((SHAPLEY, self.by_shapley), (ELIMINATION, self.by_elimination), (COMPLEMENT, self.by_complement)):
            v = fn(comp)
            if v is not None:
                found.append((method, v))
                if not self.cross_check:
                    break
        if self.perturbation and (not found or self.cross_check):
            v = self.by_perturbation(comp)
            if v is not None:
                found.append((PERTURBATION, v))
        if not found:
            raise Unresolvable(f"no method resolves the index of component {comp.id}")
        values = {v for _, v in found}
        if len(values) > 1:
            raise MethodDisagreement(f"component {comp.id}: " + ", ".join(f"{m}={v}" for m, v in found))
        res = IndexResult(found[0][1], found[0][0], tuple(found))
        self._cache[comp.id] = res
        return res

    def all_indices(self) -> dict:
        return {c.id: self.index(c) for c in self.comps}


def enumerate_generic(game: BimatrixGame) -> list:
    from .equilibria import enumerate_extreme_equilibria

    return enumerate_extreme_equilibria(game)


def component_index(game: BimatrixGame, component: NashComponent, comps: Sequence[NashComponent] | None = None, seed: int = 0, cross_check: bool = False) -> int:
    return IndexSolver(game, comps, seed=seed, cross_check=cross_check).index(component).value


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleRegion:
    """Per-player polytope (None = the whole simplex)."""

    row: InequalityPolytope | None = None
    col: InequalityPolytope | None = None

    def contains(self, x, y) -> bool:
        return (self.row is None or self.row.contains(x)) and (self.col is None or self.col.contains(y))


def _hull_meets(verts, poly: InequalityPolytope | None) -> bool:
    if poly is None:
        return True
    k = len(verts)
    d = len(verts[0])
    rows = [([1] * k, EQ, 1)]
    for coeffs, bound, _ in poly.inequalities:
        rows.append(([dot(coeffs, v) for v in verts], LE, bound))
    return lp_solve(LinearProgram.build([0] * k, rows)).optimal


def _hull_inside(verts, poly: InequalityPolytope | None) -> bool:
    if poly is None:
        return True
    return all(dot(c, v) <= b for v in verts for c, b, _ in poly.inequalities)


def region_index(game: BimatrixGame, region: AdmissibleRegion, comps: Sequence[NashComponent] | None = None, solver: IndexSolver | None = None) -> int:
    """Sum of indices of components inside the closed region."""
    solver = solver or IndexSolver(game, comps)
    total = 0
    for c in solver.comps:
        inside = all(_hull_inside(s.xs, region.row) and _hull_inside(s.ys, region.col) for s in c.subsets)
        meets = any(_hull_meets(s.xs, region.row) and _hull_meets(s.ys, region.col) for s in c.subsets)
        if inside:
            total += solver.index(c).value
        elif meets:
            raise ComponentStraddlesBoundary(f"component {c.id} is partly inside the region")
    return total


# ---------------------------------------------------------------------------
# Duplicate invariance
# ---------------------------------------------------------------------------


def check_duplication_invariance(game: BimatrixGame, component: NashComponent, duplicates: Sequence, comps=None, seed: int = 0) -> bool:
    """Index of ``component`` is unchanged after adding duplicates.

    ``duplicates`` lists ``(player, mixture)`` pairs.
    """
    if not duplicates:
        return True
    base = IndexSolver(game, comps, seed=seed)
    original = base.index(component).value
    g = game
    for player, mix in duplicates:
        g, _ = add_duplicates(g, player, [mix])
    e = component.extremes[0]
    pad_x = e.x + (Fraction(0),) * (g.shape[0] - game.shape[0])
    pad_y = e.y + (Fraction(0),) * (g.shape[1] - game.shape[1])
    solver = IndexSolver(g, seed=seed)
    target = next((c for c in solver.comps if c.contains(pad_x, pad_y)), None)
    if target is None:
        raise Unresolvable("component vanished after adding duplicates")
    return solver.index(target).value == original
