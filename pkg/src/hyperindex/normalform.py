"""Bimatrix games, strategy equivalence and the reduced normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactcore import EQ, GE, LinearProgram, dot, in_convex_hull, lp_solve, rat


def _matrix(rows) -> tuple:
    return tuple(tuple(rat(v) for v in row) for row in rows)


@dataclass(frozen=True)
class BimatrixGame:
    """Two-player normal form. ``A`` pays the row player (player 1)."""

    row_labels: tuple
    col_labels: tuple
    A: tuple
    B: tuple

    def __post_init__(self):
        m, n = len(self.row_labels), len(self.col_labels)
        if m < 1 or n < 1:
            raise ValueError("a game needs at least one strategy per player")
        for M in (self.A, self.B):
            if len(M) != m or any(len(r) != n for r in M):
                raise ValueError("payoff matrices must be %dx%d" % (m, n))
        if len(set(self.row_labels)) != m or len(set(self.col_labels)) != n:
            raise ValueError("strategy labels must be unique per player")

    @classmethod
    def from_lists(cls, A, B, row_labels=None, col_labels=None) -> "BimatrixGame":
        A, B = _matrix(A), _matrix(B)
        m, n = len(A), len(A[0]) if A else 0
        rl = tuple(row_labels) if row_labels is not None else tuple(f"r{i + 1}" for i in range(m))
        cl = tuple(col_labels) if col_labels is not None else tuple(f"c{j + 1}" for j in range(n))
        return cls(rl, cl, A, B)

    @classmethod
    def from_pairs(cls, table, row_labels=None, col_labels=None) -> "BimatrixGame":
        """Build from a table of ``(a, b)`` payoff pairs."""
        A = [[p[0] for p in row] for row in table]
        B = [[p[1] for p in row] for row in table]
        return cls.from_lists(A, B, row_labels, col_labels)

    @property
    def shape(self) -> tuple:
        return len(self.row_labels), len(self.col_labels)

    def labels(self, player: int) -> tuple:
        return self.row_labels if player == 1 else self.col_labels

    def index_of(self, player: int, label) -> int:
        return self.labels(player).index(label)

    def transpose(self) -> "BimatrixGame":
        """Swap the roles of the players."""
        At = tuple(zip(*self.B))
        Bt = tuple(zip(*self.A))
        return BimatrixGame(self.col_labels, self.row_labels, At, Bt)

    def row_vector(self, i: int) -> tuple:
        return self.A[i] + self.B[i]

    def col_vector(self, j: int) -> tuple:
        return tuple(r[j] for r in self.A) + tuple(r[j] for r in self.B)

    def pair(self, i: int, j: int) -> tuple:
        return self.A[i][j], self.B[i][j]

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "BimatrixGame":
        return BimatrixGame(
            tuple(self.row_labels[i] for i in rows),
            tuple(self.col_labels[j] for j in cols),
            tuple(tuple(self.A[i][j] for j in cols) for i in rows),
            tuple(tuple(self.B[i][j] for j in cols) for i in rows),
        )

    def payoff_entries(self):
        for M in (self.A, self.B):
            for row in M:
                yield from row


@dataclass(frozen=True)
class MixedProfile:
    x: tuple
    y: tuple

    @classmethod
    def of(cls, x, y) -> "MixedProfile":
        return cls(tuple(rat(v) for v in x), tuple(rat(v) for v in y))

    def strategy(self, player: int) -> tuple:
        return self.x if player == 1 else self.y


def pure(n: int, i: int) -> tuple:
    return tuple(Fraction(int(k == i)) for k in range(n))


def mixed_from_labels(labels: Sequence, weights: Mapping) -> tuple:
    """Vector over ``labels`` from a ``{label: weight}`` mapping."""
    unknown = set(weights) - set(labels)
    if unknown:
        raise KeyError(f"unknown strategies {sorted(map(str, unknown))}")
    return tuple(rat(weights.get(l, 0)) for l in labels)


def _check_dist(v: Sequence[Fraction], n: int) -> None:
    if len(v) != n:
        raise ValueError(f"strategy has {len(v)} entries, expected {n}")


def row_payoffs(game: BimatrixGame, y: Sequence[Fraction]) -> tuple:
    """Player 1's payoff of each pure row against ``y``."""
    return tuple(dot(r, y) for r in game.A)


def col_payoffs(game: BimatrixGame, x: Sequence[Fraction]) -> tuple:
    """Player 2's payoff of each pure column against ``x``."""
    n = len(game.col_labels)
    return tuple(sum((x[i] * game.B[i][j] for i in range(len(x)) if x[i]), Fraction(0)) for j in range(n))


def payoff(game: BimatrixGame, profile: MixedProfile) -> tuple:
    m, n = game.shape
    _check_dist(profile.x, m)
    _check_dist(profile.y, n)
    return dot(profile.x, row_payoffs(game, profile.y)), dot(profile.x, [dot(r, profile.y) for r in game.B])


def strategy_rows(game: BimatrixGame, player: int, sigma: Sequence[Fraction]) -> tuple:
    """Both players' payoffs of ``sigma`` against every opposing pure strategy."""
    if player == 1:
        _check_dist(sigma, game.shape[0])
        return col_payoffs(BimatrixGame(game.row_labels, game.col_labels, game.B, game.A), sigma) + col_payoffs(game, sigma)
    _check_dist(sigma, game.shape[1])
    return row_payoffs(game, sigma) + tuple(dot(r, sigma) for r in game.B)


def is_equivalent(game: BimatrixGame, player: int, sigma, sigma_prime) -> bool:
    """Weight vectors or ``{label: weight}`` mappings."""
    labels = game.labels(player)
    sigma, sigma_prime = (
        mixed_from_labels(labels, s) if isinstance(s, Mapping) else tuple(rat(v) for v in s) for s in (sigma, sigma_prime)
    )
    return strategy_rows(game, player, sigma) == strategy_rows(game, player, sigma_prime)


def best_reply_indices(game: BimatrixGame, player: int, opponent: Sequence[Fraction]) -> tuple:
    vals = row_payoffs(game, opponent) if player == 1 else col_payoffs(game, opponent)
    best = max(vals)
    return tuple(i for i, v in enumerate(vals) if v == best)


def best_replies(game: BimatrixGame, player: int, opponent) -> frozenset:
    opponent = tuple(rat(v) for v in opponent)
    labels = game.labels(player)
    return frozenset(labels[i] for i in best_reply_indices(game, player, opponent))


def perturb(game: BimatrixGame, dA, dB) -> BimatrixGame:
    dA, dB = _matrix(dA), _matrix(dB)
    m, n = game.shape
    for d in (dA, dB):
        if len(d) != m or any(len(r) != n for r in d):
            raise ValueError("perturbation dimensions differ from the game")
    A = tuple(tuple(a + d for a, d in zip(ra, rd)) for ra, rd in zip(game.A, dA))
    B = tuple(tuple(b + d for b, d in zip(rb, rd)) for rb, rd in zip(game.B, dB))
    return BimatrixGame(game.row_labels, game.col_labels, A, B)


# ---------------------------------------------------------------------------
# Equivalence maps, reduction, duplicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceMap:
    """Per player: strategy label -> ``{retained label: weight}``.

    Retained strategies map to themselves with weight 1.
    """

    rows: Mapping
    cols: Mapping

    def for_player(self, player: int) -> Mapping:
        return self.rows if player == 1 else self.cols

    def image(self, player: int, labels: Sequence, sigma: Sequence[Fraction], target_labels: Sequence) -> tuple:
        """Push a mixed strategy over ``labels`` to one over ``target_labels``."""
        table = self.for_player(player)
        out = {l: Fraction(0) for l in target_labels}
        for l, w in zip(labels, sigma):
            if w:
                for t, v in table[l].items():
                    out[t] += w * v
        return tuple(out[l] for l in target_labels)


def _reduce_player(game: BimatrixGame, player: int) -> tuple:
    """Indices kept for ``player`` and the weights of every dropped strategy."""
    labels = game.labels(player)
    vec = game.row_vector if player == 1 else game.col_vector
    vectors = [vec(i) for i in range(len(labels))]
    kept: list[int] = []
    first_of: dict = {}
    dup_of: dict[int, int] = {}
    for i, v in enumerate(vectors):
        if v in first_of:
            dup_of[i] = first_of[v]
        else:
            first_of[v] = i
            kept.append(i)
    changed = True
    while changed:
        changed = False
        for i in list(kept):
            others = [k for k in kept if k != i]
            if others and in_convex_hull(vectors[i], [vectors[k] for k in others]).inside:
                kept.remove(i)
                changed = True
                break
    mapping: dict = {}
    for i, l in enumerate(labels):
        if i in kept:
            mapping[l] = {l: Fraction(1)}
        else:
            res = in_convex_hull(vectors[i], [vectors[k] for k in kept])
            assert res.inside
            mapping[l] = {labels[k]: w for k, w in zip(kept, res.weights) if w}
    return kept, mapping


def reduce(game: BimatrixGame) -> tuple:
    """Reduced normal form and the map sending each strategy to its image."""
    current = game
    rows_map = {l: {l: Fraction(1)} for l in game.row_labels}
    cols_map = {l: {l: Fraction(1)} for l in game.col_labels}
    while True:
        kept_r, map_r = _reduce_player(current, 1)
        kept_c, map_c = _reduce_player(current, 2)
        if len(kept_r) == current.shape[0] and len(kept_c) == current.shape[1]:
            break
        rows_map = {l: _compose(w, map_r) for l, w in rows_map.items()}
        cols_map = {l: _compose(w, map_c) for l, w in cols_map.items()}
        current = current.restrict(kept_r, kept_c)
    return current, EquivalenceMap(rows_map, cols_map)


def _compose(weights: Mapping, step: Mapping) -> dict:
    out: dict = {}
    for l, w in weights.items():
        for t, v in step[l].items():
            out[t] = out.get(t, Fraction(0)) + w * v
    return {t: v for t, v in out.items() if v}


def add_duplicates(game: BimatrixGame, player: int, mixtures: Sequence) -> tuple:
    """Append one pure strategy per mixture, paying exactly what the mixture pays.

    Mixtures are weight vectors or ``{label: weight}`` mappings.
    """
    labels = game.labels(player)
    new_labels = list(labels)
    table = {l: {l: Fraction(1)} for l in labels}
    vectors = []
    for k, mix in enumerate(mixtures, start=1):
        w = mixed_from_labels(labels, mix) if isinstance(mix, Mapping) else tuple(rat(v) for v in mix)
        _check_dist(w, len(labels))
        if any(v < 0 for v in w) or sum(w) != 1:
            raise ValueError("duplicate mixture must be a probability vector")
        support = [labels[i] for i, v in enumerate(w) if v]
        base = support[0] if len(support) == 1 else "mix"
        name = f"{base}#dup{k}"
        while name in new_labels:
            name += "'"
        new_labels.append(name)
        table[name] = {labels[i]: v for i, v in enumerate(w) if v}
        vectors.append(w)
    g = game if player == 1 else game.transpose()
    A = list(g.A)
    B = list(g.B)
    for w in vectors:
        A.append(tuple(sum((w[i] * g.A[i][j] for i in range(len(w)) if w[i]), Fraction(0)) for j in range(len(g.col_labels))))
        B.append(tuple(sum((w[i] * g.B[i][j] for i in range(len(w)) if w[i]), Fraction(0)) for j in range(len(g.col_labels))))
    out = BimatrixGame(tuple(new_labels), g.col_labels, tuple(A), tuple(B))
    if player == 2:
        out = out.transpose()
    other = {l: {l: Fraction(1)} for l in game.labels(3 - player)}
    emap = EquivalenceMap(table, other) if player == 1 else EquivalenceMap(other, table)
    return out, emap


def eliminate_strictly_inferior(game: BimatrixGame, component) -> tuple:
    """Drop pure strategies that are strictly worse replies everywhere on ``component``.

    ``component`` needs ``subsets``, each with vertex lists ``xs`` and ``ys``.
    Within one maximal Nash subset the best-reply payoff is linear (any support
    strategy of a fixed vertex attains it), so checking vertices suffices.
    Returns ``(smaller game, (removed row labels, removed column labels))``.
    """
    m, n = game.shape
    keep_r = [False] * m
    keep_c = [False] * n
    for sub in component.subsets:
        for y in sub.ys:
            vals = row_payoffs(game, y)
            best = max(vals)
            for i, v in enumerate(vals):
                if v == best:
                    keep_r[i] = True
            for x in sub.xs:
                if dot(x, vals) != best:
                    raise ValueError("component is not an equilibrium set")
        for x in sub.xs:
            vals = col_payoffs(game, x)
            best = max(vals)
            for j, v in enumerate(vals):
                if v == best:
                    keep_c[j] = True
            for y in sub.ys:
                if dot(y, vals) != best:
                    raise ValueError("component is not an equilibrium set")
    rows = [i for i in range(m) if keep_r[i]]
    cols = [j for j in range(n) if keep_c[j]]
    removed = (
        tuple(game.row_labels[i] for i in range(m) if not keep_r[i]),
        tuple(game.col_labels[j] for j in range(n) if not keep_c[j]),
    )
    return game.restrict(rows, cols), removed


def _strictly_dominated(M: Sequence[Sequence[Fraction]], i: int, alive: Sequence[int], cols: Sequence[int]) -> bool:
    """Is row ``i`` strictly worse than some mixture of the other alive rows?"""
    others = [k for k in alive if k != i]
    if not others:
        return False
    k = len(others)
    rows = [([1] * k + [0], EQ, 1)]
    for j in cols:
        rows.append(([M[r][j] for r in others] + [-1], GE, M[i][j]))
    bounds = [(0, None)] * k + [(None, None)]
    res = lp_solve(LinearProgram.build([0] * k + [1], rows, bounds))
    return res.optimal and res.value > 0


def iterated_strict_dominance(game: BimatrixGame) -> tuple:
    """Iteratively remove pure strategies strictly dominated by mixtures.

    Returns ``(smaller game, (removed row labels, removed column labels))``.
    """
    rows = list(range(game.shape[0]))
    cols = list(range(game.shape[1]))
    Bt = [list(c) for c in zip(*game.B)]
    changed = True
    while changed:
        changed = False
        for i in list(rows):
            if _strictly_dominated(game.A, i, rows, cols):
                rows.remove(i)
                changed = True
        for j in list(cols):
            if _strictly_dominated(Bt, j, cols, rows):
                cols.remove(j)
                changed = True
    removed = (
        tuple(l for i, l in enumerate(game.row_labels) if i not in rows),
        tuple(l for j, l in enumerate(game.col_labels) if j not in cols),
    )
    return game.restrict(rows, cols), removed
