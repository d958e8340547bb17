"""Excluded and included games of a component with a unique outcome, and the
factorized index.

Everything is built from the tree and the outcome ``Q``; the opponent's
on-path play is pinned by ``Q`` itself (``b(a|u) = Q(u, a) / Q(u)``), which is
the behavior every profile of the component induces at on-path infosets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .equilibria import NashComponent, OutcomeCheck, component_outcome, equilibrium_components, is_equilibrium
from .exactcore import EQ, GE, LE, InequalityPolytope, LinearProgram, dot, lp_solve, polytope_dimension
from .gametree import (
    BehaviorStrategy,
    Chance,
    Decision,
    GameTree,
    Outcome,
    PureStrategy,
    TreeNormalForm,
    expected_payoffs,
    mixed_to_behavior,
    profile_outcome,
    reach_sets,
)
from .index import AdmissibleRegion, ComponentStraddlesBoundary, IndexSolver, Unresolvable
from .normalform import BimatrixGame, col_payoffs, iterated_strict_dominance, reduce, row_payoffs


class NoUniqueOutcome(ValueError):
    pass


class IllDefined(ValueError):
    pass


class BoundaryEquilibrium(ValueError):
    pass


class GenericityFailure(ValueError):
    pass


class FactorUnresolvable(RuntimeError):
    pass


class NoExcludedGame(ValueError):
    """The player has no observable deviation; its factor is 1 by convention."""


# ---------------------------------------------------------------------------
# Partition
# ---------------------------------------------------------------------------


def node_probabilities(tree: GameTree, Q: Outcome) -> dict:
    """Q(h) for every node: mass of terminals below it."""
    probs = {nid: Fraction(0) for nid in tree.nodes}
    for z, p in Q.probs:
        if not p:
            continue
        nid = z
        while nid is not None:
            probs[nid] += p
            nid = tree.nodes[nid].parent
    return probs


def _child(tree: GameTree, nid: str, label: str) -> str:
    return ("" if nid == "/" else nid) + "/" + label


@dataclass(frozen=True)
class OnOffPartition:
    on: tuple  # (player-1 on-path infosets, player-2 ...)
    off: tuple
    zero_terminals: tuple
    node_prob: Mapping = field(repr=False, compare=False, default_factory=dict)
    action_prob: Mapping = field(repr=False, compare=False, default_factory=dict)  # (infoset, action) -> Q(u, a)
    infoset_prob: Mapping = field(repr=False, compare=False, default_factory=dict)

    def is_on(self, player: int, infoset: str) -> bool:
        return infoset in self.on[player - 1]

    def anchor(self, player: int) -> dict:
        """On-path behavior pinned by the outcome."""
        out = {}
        for u in self.on[player - 1]:
            qu = self.infoset_prob[u]
            out[u] = {a: q / qu for (v, a), q in self.action_prob.items() if v == u}
        return out

    def support_actions(self, infoset: str) -> tuple:
        return tuple(a for (v, a), q in self.action_prob.items() if v == infoset and q > 0)


def on_off_partition(tree: GameTree, Q: Outcome) -> OnOffPartition:
    npb = node_probabilities(tree, Q)
    on, off = ([], []), ([], [])
    aprob: dict = {}
    iprob: dict = {}
    for player in (1, 2):
        for uid, u in tree.infosets[player].items():
            qu = sum((npb[h] for h in u.nodes), Fraction(0))
            iprob[uid] = qu
            (on if qu > 0 else off)[player - 1].append(uid)
            for a in u.actions:
                aprob[(uid, a)] = sum((npb[_child(tree, h, a)] for h in u.nodes), Fraction(0))
    zero = tuple(z for z, p in Q.probs if p == 0)
    return OnOffPartition(tuple(map(tuple, on)), tuple(map(tuple, off)), zero, npb, aprob, iprob)


# ---------------------------------------------------------------------------
# Component handles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentData:
    """A component as seen from the tree: extreme profiles over plan-form strategies.

    ``component`` is None when only a representative profile is known
    (games too large to enumerate).
    """

    id: str
    nf: TreeNormalForm
    profiles: tuple  # ((x, y), ...)
    component: NashComponent | None = None

    @classmethod
    def from_component(cls, nf: TreeNormalForm, comp: NashComponent) -> "ComponentData":
        return cls(comp.id, nf, tuple((e.x, e.y) for e in comp.extremes), comp)

    @classmethod
    def from_representative(cls, nf: TreeNormalForm, x: Mapping, y: Mapping, id: str = "K") -> "ComponentData":
        g = nf.game
        xv = tuple(Fraction(x.get(l, 0)) for l in g.row_labels)
        yv = tuple(Fraction(y.get(l, 0)) for l in g.col_labels)
        if set(x) - set(g.row_labels) or set(y) - set(g.col_labels):
            raise KeyError("representative uses unknown strategy labels")
        if not is_equilibrium(g, xv, yv):
            raise ValueError("representative profile is not an equilibrium")
        return cls(id, nf, ((xv, yv),), None)


def _local_outcome_variation(tree: GameTree, nf: TreeNormalForm, x, y) -> OutcomeCheck:
    """Search the two best-reply faces through ``(x, y)`` for another outcome.

    Can only certify multiplicity; a negative answer is reported as unique.
    """
    g = nf.game
    base = profile_outcome(tree, nf, x, y)
    terms = tree.terminals
    q = base.as_dict()
    for player in (1, 2):
        gg = g if player == 2 else g.transpose()
        # vary player `player`'s strategy; the other is fixed as the "row" of gg
        fixed = x if player == 2 else y
        var_reach = reach_sets(tree, nf.strategies[player - 1])
        fix_reach = reach_sets(tree, nf.strategies[2 - player])
        wfix = [sum((fixed[i] for i, r in enumerate(fix_reach) if k in r), Fraction(0)) for k in range(len(terms))]
        cp = col_payoffs(gg, fixed)
        allowed = [j for j, v in enumerate(cp) if v == max(cp)]
        n = len(allowed)
        support = [i for i, v in enumerate(fixed) if v]
        rows = [([1] * n, EQ, 1)]
        for i in support:
            for k in range(len(fixed)):
                if k != i:
                    diff = [gg.A[i][j] - gg.A[k][j] for j in allowed]
                    if any(diff):
                        rows.append((diff, GE, 0))

        def coeffs(zset):
            c = [Fraction(0)] * n
            for k in zset:
                w = terms[k].chance_prob * wfix[k]
                if w:
                    for jj, j in enumerate(allowed):
                        if k in var_reach[j]:
                            c[jj] += w
            return c

        targets = [("zero", [k for k, t in enumerate(terms) if q[t.id] == 0], False)]
        targets += [(t.id, [k], mx) for k, t in enumerate(terms) if q[t.id] > 0 for mx in (False, True)]
        for name, zset, minimize in targets:
            c = coeffs(zset)
            res = lp_solve(LinearProgram.build(c, rows, maximize=not minimize))
            ref = sum((q[terms[k].id] for k in zset), Fraction(0))
            if res.optimal and res.value != ref:
                other = [Fraction(0)] * len(var_reach)
                for jj, j in enumerate(allowed):
                    other[j] = res.point[jj]
                other = tuple(other)
                prof = (x, other) if player == 2 else (other, y)
                return OutcomeCheck(False, None, ((x, y), prof))
    return OutcomeCheck(True, base)


def outcome_check(tree: GameTree, data: ComponentData) -> tuple:
    """``(OutcomeCheck, method)`` with method ``enumerated`` or ``local``."""
    if data.component is not None:
        return component_outcome(tree, data.nf, data.component), "enumerated"
    x, y = data.profiles[0]
    return _local_outcome_variation(tree, data.nf, x, y), "local"


def unique_outcome(tree: GameTree, data: ComponentData) -> Outcome:
    chk, _ = outcome_check(tree, data)
    if not chk.unique:
        raise NoUniqueOutcome(f"component {data.id} induces more than one outcome")
    return chk.outcome


# ---------------------------------------------------------------------------
# Deviations and strategy splits
# ---------------------------------------------------------------------------


def is_observable_deviation(tree: GameTree, part: OnOffPartition, s: PureStrategy) -> bool:
    """Does ``s`` reach a zero-probability node with positive probability?

    Along such a path every earlier node is on path, so the opponent's and
    Nature's moves there have positive probability automatically.
    """
    player = s.player
    d = s.as_dict()
    npb = part.node_prob
    for u in tree.infosets[player].values():
        if not part.is_on(player, u.id):
            continue
        a = d.get(u.id)
        if a is None or any(d.get(v) != b for v, b in u.history):
            continue
        for h in u.nodes:
            if npb[h] > 0 and npb[_child(tree, h, a)] == 0:
                return True
    return False


def observable_deviations(tree: GameTree, part: OnOffPartition, nf: TreeNormalForm) -> tuple:
    """Per player, the plan-form strategies that are observable deviations."""
    return tuple(
        tuple(s for s in nf.strategies[p - 1] if is_observable_deviation(tree, part, s)) for p in (1, 2)
    )


def _partial_plans(tree: GameTree, player: int, infosets: Sequence[str], reachable) -> list:
    """Plans over ``infosets``; an infoset is assigned when ``reachable(plan, u)``."""
    plans: list[tuple] = [()]
    for u in tree.infosets[player].values():
        if u.id not in infosets:
            continue
        nxt = []
        for plan in plans:
            if reachable(dict(plan), u):
                nxt.extend(plan + ((u.id, a),) for a in u.actions)
            else:
                nxt.append(plan)
        plans = nxt
    return plans


def _label(tree: GameTree, player: int, moves) -> str:
    sep = "" if tree.action_labels_single_char(player) else "-"
    return sep.join(a for _, a in moves) or "*"


def _unique_labels(tree, player, plans) -> list:
    labels = [_label(tree, player, p) for p in plans]
    if len(set(labels)) != len(labels):
        labels = [",".join(f"{u}:{a}" for u, a in p) or "*" for p in plans]
    return [PureStrategy(player, p, l) for p, l in zip(plans, labels)]


def off_path_plans(tree: GameTree, part: OnOffPartition, player: int) -> list:
    """S0: partial plans over off-path infosets still reachable under the anchor."""
    anchor_support = {u: set(part.support_actions(u)) for u in part.on[player - 1]}

    def reachable(d, u):
        for v, b in u.history:
            if v in anchor_support:
                if b not in anchor_support[v]:
                    return False
            elif d.get(v) != b:
                return False
        return True

    return _unique_labels(tree, player, _partial_plans(tree, player, part.off[player - 1], reachable))


def equilibrium_action_plans(tree: GameTree, part: OnOffPartition, player: int) -> list:
    """S-otimes: plans over on-path infosets using positive-probability actions only."""
    on = part.on[player - 1]
    plans: list[tuple] = [()]
    for u in tree.infosets[player].values():
        if u.id not in on:
            continue
        nxt = []
        for plan in plans:
            d = dict(plan)
            if all(d.get(v) == b for v, b in u.history if v in on):
                nxt.extend(plan + ((u.id, a),) for a in part.support_actions(u.id))
            else:
                nxt.append(plan)
        plans = nxt
    return _unique_labels(tree, player, plans)


def on_path_plans(tree: GameTree, part: OnOffPartition, player: int) -> list:
    """S+: plans over on-path infosets with any action."""
    on = part.on[player - 1]
    return _unique_labels(
        tree, player, _partial_plans(tree, player, on, lambda d, u: all(d.get(v) == b for v, b in u.history if v in on))
    )


def _product_mixture(tree: GameTree, player: int, infosets: Sequence[str], b: BehaviorStrategy) -> dict:
    """Mixture over full assignments on ``infosets`` with product weights."""
    us = [u for u in tree.infosets[player].values() if u.id in infosets]
    out = {}
    for combo in itertools.product(*[u.actions for u in us]):
        w = Fraction(1)
        for u, a in zip(us, combo):
            w *= b.prob(u.id, a)
            if not w:
                break
        if w:
            moves = tuple((u.id, a) for u, a in zip(us, combo))
            out[PureStrategy(player, moves, _label(tree, player, moves))] = w
    return out


def kuhn_split(tree: GameTree, part: OnOffPartition, player: int, mixed: Mapping) -> tuple:
    """Split a mixed strategy into on-path and off-path factors.

    Returns two mixtures over partial assignments (on ``U+`` and ``U0``) whose
    product is realization-equivalent to ``mixed``.
    """
    b = mixed_to_behavior(tree, player, mixed)
    return (
        _product_mixture(tree, player, part.on[player - 1], b),
        _product_mixture(tree, player, part.off[player - 1], b),
    )


def combine_split(tree: GameTree, player: int, plus: Mapping, zero: Mapping) -> BehaviorStrategy:
    """Behavior strategy of the product of two partial mixtures."""
    local = {}
    for part_mix in (plus, zero):
        for s, w in part_mix.items():
            for u, a in s.moves:
                local.setdefault(u, {x: Fraction(0) for x in tree.infosets[player][u].actions})
                local[u][a] += w
    for uid, u in tree.infosets[player].items():
        if uid not in local:
            local[uid] = {a: Fraction(1, len(u.actions)) for a in u.actions}
    return BehaviorStrategy(player, local)


def barycenter_anchor(tree: GameTree, part: OnOffPartition, data: "ComponentData", player: int) -> dict:
    """On-path behavior of the barycenter of the component's extreme profiles."""
    k = len(data.profiles)
    mixed: dict = {}
    for prof in data.profiles:
        for s, w in zip(data.nf.strategies[player - 1], prof[player - 1]):
            if w:
                mixed[s] = mixed.get(s, Fraction(0)) + w / k
    b = mixed_to_behavior(tree, player, mixed)
    return {u: dict(b.local[u]) for u in part.on[player - 1]}


def uniform_anchor(tree: GameTree, part: OnOffPartition, player: int) -> dict:
    """On-path behavior of the uniform mixture over equilibrium-action plans."""
    plans = [s.as_dict() for s in equilibrium_action_plans(tree, part, player)]
    out = {}
    for uid in part.on[player - 1]:
        u = tree.infosets[player][uid]
        live = [d for d in plans if all(d.get(v) == b for v, b in u.history)]
        out[uid] = {a: Fraction(sum(1 for d in live if d.get(uid) == a), len(live)) for a in u.actions}
    return out


# ---------------------------------------------------------------------------
# Excluded game
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExcludedGame:
    """Deviator ``player`` is the row player of ``game``."""

    player: int
    game: BimatrixGame
    anchor: Mapping = field(compare=False)
    on_path_payoff: Fraction = Fraction(0)
    row_strategies: tuple = field(default=(), compare=False)
    col_strategies: tuple = field(default=(), compare=False)


def _with_visible_anchor(tree: GameTree, part: OnOffPartition, player: int, anchor: Mapping, plans: list) -> list:
    """Prefix labels with pure anchor moves at on-path infosets a deviation can enter."""
    prefix = []
    for uid, u in tree.infosets[player].items():
        if uid in anchor and any(part.node_prob[h] == 0 for h in u.nodes):
            pure = [a for a, w in anchor[uid].items() if w == 1]
            if pure:
                prefix.append((uid, pure[0]))
    if not prefix:
        return plans
    out = []
    for s in plans:
        moves = tuple(prefix) + s.moves
        out.append(PureStrategy(player, s.moves, _label(tree, player, moves)))
    return out


def _deviation_payoffs(tree: GameTree, player: int, s: PureStrategy, anchor: Mapping, col: PureStrategy) -> tuple:
    own = dict(s.moves)
    cd = dict(col.moves)
    other = 3 - player
    total = [Fraction(0), Fraction(0)]
    for t in tree.terminals:
        if not all(own.get(u) == a for u, a in t.moves[player - 1]):
            continue
        p = t.chance_prob
        for u, a in t.moves[other - 1]:
            if u in anchor:
                p *= anchor[u].get(a, Fraction(0))
            else:
                p *= Fraction(int(cd.get(u) == a))
            if not p:
                break
        if p:
            total[0] += p * t.payoff[0]
            total[1] += p * t.payoff[1]
    return tuple(total)


def excluded_game(
    tree: GameTree,
    part: OnOffPartition,
    Q: Outcome,
    player: int,
    deviations: Sequence[PureStrategy],
    anchor: Mapping | None = None,
) -> ExcludedGame | None:
    """Deviator's plans versus the opponent's off-path partial plans.

    Exact duplicate rows and columns are merged (first label kept).
    """
    if not deviations:
        raise NoExcludedGame(f"player {player} has no observable deviation")
    other = 3 - player
    anchor = anchor if anchor is not None else part.anchor(other)
    cols = _with_visible_anchor(tree, part, other, anchor, off_path_plans(tree, part, other))
    table = [[_deviation_payoffs(tree, player, s, anchor, c) for c in cols] for s in deviations]
    # deviator first
    mine = [[p[player - 1] for p in row] for row in table]
    theirs = [[p[other - 1] for p in row] for row in table]
    rows_keep, seen = [], set()
    for i in range(len(deviations)):
        key = (tuple(mine[i]), tuple(theirs[i]))
        if key not in seen:
            seen.add(key)
            rows_keep.append(i)
    cols_keep, seen = [], set()
    for j in range(len(cols)):
        key = tuple(mine[i][j] for i in rows_keep) + tuple(theirs[i][j] for i in rows_keep)
        if key not in seen:
            seen.add(key)
            cols_keep.append(j)
    game = BimatrixGame(
        tuple(deviations[i].label for i in rows_keep),
        tuple(cols[j].label for j in cols_keep),
        tuple(tuple(mine[i][j] for j in cols_keep) for i in rows_keep),
        tuple(tuple(theirs[i][j] for j in cols_keep) for i in rows_keep),
    )
    gq = expected_payoffs(tree, Q)[player - 1]
    return ExcludedGame(
        player,
        game,
        anchor,
        gq,
        tuple(deviations[i] for i in rows_keep),
        tuple(cols[j] for j in cols_keep),
    )


def excluded_games(tree: GameTree, part: OnOffPartition, Q: Outcome, deviations: Sequence) -> list:
    """Both players' excluded games; None where a player has no deviation."""
    return [excluded_game(tree, part, Q, p, deviations[p - 1]) if deviations[p - 1] else None for p in (1, 2)]


@dataclass(frozen=True)
class SupportingPolytope:
    polytope: InequalityPolytope
    bound: Fraction

    def contains(self, sigma: Sequence[Fraction]) -> bool:
        return self.polytope.contains(sigma)

    def on_boundary(self, sigma: Sequence[Fraction]) -> bool:
        """Inside with at least one deviation exactly indifferent."""
        return self.contains(sigma) and any(dot(c, sigma) == b for c, b, _ in self.polytope.inequalities)


def supporting_polytope(eg: ExcludedGame) -> SupportingPolytope:
    ineqs = tuple((row, eg.on_path_payoff, LE) for row in eg.game.A)
    return SupportingPolytope(InequalityPolytope(eg.game.col_labels, ineqs), eg.on_path_payoff)


@dataclass(frozen=True)
class PolytopeIndex:
    value: int
    simplified: BimatrixGame
    inside: tuple  # ((x, y, index of its component), ...) extreme equilibria inside
    outside: tuple


def _boundary_witness(eg: ExcludedGame, game: BimatrixGame, solver: IndexSolver):
    """An equilibrium of the simplified game paying the deviator exactly G_n(Q)."""
    g = eg.on_path_payoff
    for c in solver.comps:
        for s in c.subsets:
            vals = [dot(x, row_payoffs(game, y)) for x in s.xs for y in s.ys]
            if min(vals) <= g <= max(vals):
                for x in s.xs:
                    for y in s.ys:
                        if dot(x, row_payoffs(game, y)) == g:
                            return (x, y)
                return (s.xs[0], s.ys[0])
    return None


def simplify_excluded(eg: ExcludedGame) -> tuple:
    """Iterated strict dominance then reduction; region restricted accordingly."""
    small, _ = iterated_strict_dominance(eg.game)
    red, _ = reduce(small)
    keep = [eg.game.col_labels.index(l) for l in red.col_labels]
    ineqs = tuple((tuple(row[j] for j in keep), eg.on_path_payoff, LE) for row in eg.game.A)
    return red, InequalityPolytope(red.col_labels, ineqs)


def supporting_polytope_index(eg: ExcludedGame, seed: int = 0) -> PolytopeIndex:
    """Sum of indices of the excluded game's components inside the supporting polytope."""
    red, poly = simplify_excluded(eg)
    solver = IndexSolver(red, seed=seed)
    w = _boundary_witness(eg, red, solver)
    if w is not None:
        raise BoundaryEquilibrium(
            f"equilibrium pays the deviator exactly {eg.on_path_payoff}: "
            + _describe(red, w[0], w[1])
        )
    inside, outside = [], []
    total = 0
    region = AdmissibleRegion(None, poly)
    for c in solver.comps:
        ins = [region.contains(e.x, e.y) for e in c.extremes]
        if all(ins):
            v = solver.index(c).value
            total += v
            inside.extend((e.x, e.y, v) for e in c.extremes)
        elif not any(ins):
            outside.extend((e.x, e.y) for e in c.extremes)
        else:
            raise ComponentStraddlesBoundary(f"component {c.id} of the excluded game straddles the polytope")
    return PolytopeIndex(total, red, tuple(inside), tuple(outside))


def _as_map(labels, v) -> dict:
    return {l: w for l, w in zip(labels, v) if w}


def _describe(game: BimatrixGame, x, y) -> str:
    def part(labels, v):
        return " + ".join(l if w == 1 else f"{w}*{l}" for l, w in zip(labels, v) if w)

    return f"({part(game.row_labels, x)}, {part(game.col_labels, y)})"


# ---------------------------------------------------------------------------
# Included game
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncludedGame:
    game: BimatrixGame
    strategies: tuple  # (S-otimes_1, S-otimes_2)


def _completion(tree: GameTree, player: int, s: PureStrategy, pick: int) -> dict:
    d = s.as_dict()
    for uid, u in tree.infosets[player].items():
        if uid not in d:
            d[uid] = u.actions[pick]
    return d


def _pair_payoff(tree: GameTree, d1: Mapping, d2: Mapping) -> tuple:
    total = [Fraction(0), Fraction(0)]
    for t in tree.terminals:
        if all(d1.get(u) == a for u, a in t.moves[0]) and all(d2.get(u) == a for u, a in t.moves[1]):
            total[0] += t.chance_prob * t.payoff[0]
            total[1] += t.chance_prob * t.payoff[1]
    return tuple(total)


def included_game(tree: GameTree, part: OnOffPartition) -> IncludedGame:
    s1 = equilibrium_action_plans(tree, part, 1)
    s2 = equilibrium_action_plans(tree, part, 2)
    A, B = [], []
    for a in s1:
        ra, rb = [], []
        for b in s2:
            p = _pair_payoff(tree, _completion(tree, 1, a, 0), _completion(tree, 2, b, 0))
            q = _pair_payoff(tree, _completion(tree, 1, a, -1), _completion(tree, 2, b, -1))
            if p != q:
                raise IllDefined(f"included payoff of ({a.label}, {b.label}) depends on off-path play")
            ra.append(p[0])
            rb.append(p[1])
        A.append(tuple(ra))
        B.append(tuple(rb))
    game = BimatrixGame(tuple(s.label for s in s1), tuple(s.label for s in s2), tuple(A), tuple(B))
    return IncludedGame(game, (tuple(s1), tuple(s2)))


def _project(tree: GameTree, nf: TreeNormalForm, player: int, v: Sequence[Fraction], targets: Sequence[PureStrategy]) -> tuple:
    """q-otimes image of a mixed plan-form strategy."""
    out = [Fraction(0)] * len(targets)
    index = {t.moves: k for k, t in enumerate(targets)}
    tset = {u for t in targets for u, _ in t.moves}
    for s, w in zip(nf.strategies[player - 1], v):
        if not w:
            continue
        moves = tuple((u, a) for u, a in s.moves if u in tset)
        # keep only infosets the image plan actually assigns
        for t in targets:
            if all(dict(moves).get(u) == a for u, a in t.moves) and len(t.moves) <= len(moves):
                if dict(t.moves) == {u: a for u, a in moves if u in dict(t.moves)}:
                    out[index[t.moves]] += w
                    break
        else:
            raise ValueError(f"strategy {s.label} has no equilibrium-action image")
    return tuple(out)


def _included_outcome(tree: GameTree, inc: IncludedGame, x, y) -> Outcome:
    nf = TreeNormalForm(inc.game, inc.strategies)
    return profile_outcome(tree, nf, x, y)


# ---------------------------------------------------------------------------
# Genericity and the factorized index
# ---------------------------------------------------------------------------


@dataclass
class Diagnostic:
    name: str
    passed: bool
    detail: str
    witnesses: tuple = ()  # A2: (player, x labels->weight, y labels->weight, deviator payoff)


def check_genericity(
    tree: GameTree,
    data: ComponentData,
    Q: Outcome | None = None,
    excluded: Sequence[ExcludedGame | None] = (),
    checked: tuple | None = None,
) -> list:
    """A.1 and A.2 diagnostics. ``checked`` reuses an ``outcome_check`` result."""
    diags = []
    chk, how = checked or outcome_check(tree, data)
    if not chk.unique:
        diags.append(Diagnostic("A1", False, f"outcome not unique ({how} check)"))
        diags.append(Diagnostic("A2", False, "not checked: no unique outcome"))
        return diags
    Q = Q or chk.outcome
    part = on_off_partition(tree, Q)
    try:
        inc = included_game(tree, part)
        images = [
            (_project(tree, data.nf, 1, x, inc.strategies[0]), _project(tree, data.nf, 2, y, inc.strategies[1]))
            for x, y in data.profiles
        ]
        if not all(is_equilibrium(inc.game, x, y) for x, y in images):
            diags.append(Diagnostic("A1", False, "an image profile is not an equilibrium of the included game"))
        else:
            comps = equilibrium_components(inc.game)
            owners = {c.id for x, y in images for c in comps if c.contains(x, y)}
            if len(owners) != 1:
                diags.append(Diagnostic("A1", False, "images spread over several included-game components"))
            else:
                comp = next(c for c in comps if c.id in owners)
                outs = {_included_outcome(tree, inc, e.x, e.y) for e in comp.extremes}
                if outs != {Q}:
                    diags.append(Diagnostic("A1", False, "included-game component has another outcome"))
                else:
                    diags.append(Diagnostic("A1", True, f"unique outcome ({how} check); image is component {comp.id} of the included game"))
    except IllDefined as ex:
        diags.append(Diagnostic("A1", False, str(ex)))
    if not excluded:
        nf = data.nf
        devs = observable_deviations(tree, part, nf)
        excluded = excluded_games(tree, part, Q, devs)
    msgs, ok, wit = [], True, []
    for eg in excluded:
        if eg is None:
            continue
        sp = supporting_polytope(eg)
        dim = polytope_dimension(sp.polytope)
        red, _ = simplify_excluded(eg)
        w = _boundary_witness(eg, red, IndexSolver(red))
        if not dim.full_dimensional:
            ok = False
            msgs.append(f"player {eg.player}: supporting polytope has dimension {dim.dimension} < {len(eg.game.col_labels) - 1}")
        if w is not None:
            ok = False
            wit.append((eg.player, _as_map(red.row_labels, w[0]), _as_map(red.col_labels, w[1]), eg.on_path_payoff))
            msgs.append(
                f"player {eg.player}: excluded-game equilibrium {_describe(red, *w)} pays exactly G(Q) = {eg.on_path_payoff}"
            )
        if dim.full_dimensional and w is None:
            msgs.append(f"player {eg.player}: full-dimensional, equilibria inside pay strictly less than {eg.on_path_payoff}")
    diags.append(Diagnostic("A2", ok, "; ".join(msgs) or "no excluded games", tuple(wit)))
    return diags


@dataclass
class PlayerFactor:
    player: int
    has_excluded_game: bool
    value: int
    excluded: ExcludedGame | None = None
    detail: PolytopeIndex | None = None


@dataclass
class HyperstabilityReport:
    component_id: str
    outcome: Outcome | None
    payoffs: tuple | None
    factors: tuple  # (player-1 factor, included index, player-2 factor)
    product: int | None
    player_factors: tuple
    diagnostics: list
    full_index: int | None
    verdict: str

    @property
    def hyperstable(self) -> bool | None:
        if self.product is None:
            return None
        return self.product != 0


def factorized_index(
    tree: GameTree,
    data: ComponentData,
    seed: int = 0,
    strict: bool = False,
    full_check: bool = True,
) -> HyperstabilityReport:
    chk, how = outcome_check(tree, data)
    if not chk.unique:
        diags = [Diagnostic("A1", False, f"outcome not unique ({how} check)")]
        if strict:
            raise GenericityFailure("A1")
        return HyperstabilityReport(data.id, None, None, (None, None, None), None, (), diags, None, "undetermined: A.1 fails")
    Q = chk.outcome
    part = on_off_partition(tree, Q)
    devs = observable_deviations(tree, part, data.nf)
    egs = excluded_games(tree, part, Q, devs)
    diags = check_genericity(tree, data, Q, [e for e in egs if e is not None] or (), (chk, how))
    failed = [d.name for d in diags if not d.passed]
    payoffs = expected_payoffs(tree, Q)
    if failed:
        if strict:
            raise GenericityFailure("|".join(failed))
        return HyperstabilityReport(
            data.id, Q, payoffs, (None, None, None), None, (), diags, None, "undetermined: " + ", ".join(failed) + " fails"
        )
    pf = []
    for p, eg in zip((1, 2), egs):
        if eg is None:
            pf.append(PlayerFactor(p, False, 1))
            continue
        try:
            det = supporting_polytope_index(eg, seed=seed)
        except Unresolvable as ex:
            raise FactorUnresolvable(f"player {p}: {ex}") from ex
        pf.append(PlayerFactor(p, True, det.value, eg, det))
    inc = included_game(tree, part)
    images = [
        (_project(tree, data.nf, 1, x, inc.strategies[0]), _project(tree, data.nf, 2, y, inc.strategies[1]))
        for x, y in data.profiles
    ]
    isolver = IndexSolver(inc.game, seed=seed)
    target = next(c for c in isolver.comps if c.contains(*images[0]))
    try:
        inc_index = isolver.index(target).value
    except Unresolvable as ex:
        raise FactorUnresolvable(f"included game: {ex}") from ex
    product = pf[0].value * inc_index * pf[1].value
    full = None
    if full_check and data.component is not None:
        try:
            full = IndexSolver(data.nf.game, seed=seed, perturbation=False).index(data.component).value
        except Unresolvable:
            full = None
        if full is not None and full != product:
            raise FactorUnresolvable(f"factorized index {product} disagrees with the full-game index {full}")
    verdict = "hyperstable" if product != 0 else "not hyperstable"
    return HyperstabilityReport(
        data.id, Q, payoffs, (pf[0].value, inc_index, pf[1].value), product, tuple(pf), diags, full, verdict
    )
