"""Two-player extensive forms with chance moves and perfect recall.

Node ids are slash-separated paths built from action labels (``/In/L``);
chance branches are labelled ``c1``, ``c2``, ... in file order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactcore import rat
from .normalform import BimatrixGame


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Terminal:
    payoff: tuple

    @classmethod
    def of(cls, a, b) -> "Terminal":
        return cls((rat(a), rat(b)))


@dataclass(frozen=True)
class Chance:
    branches: tuple  # ((probability, child), ...)

    @classmethod
    def of(cls, *branches) -> "Chance":
        return cls(tuple((rat(p), c) for p, c in branches))


@dataclass(frozen=True)
class Decision:
    player: int
    infoset: str
    branches: tuple  # ((action, child), ...)

    @classmethod
    def of(cls, player, infoset, *branches) -> "Decision":
        return cls(int(player), str(infoset), tuple((str(a), c) for a, c in branches))

    @property
    def actions(self) -> tuple:
        return tuple(a for a, _ in self.branches)


Node = Terminal | Chance | Decision
Move = tuple  # (infoset, action)


@dataclass(frozen=True)
class NodeInfo:
    id: str
    node: object
    parent: str | None
    chance_prob: Fraction
    history: tuple  # per player index 0/1: own (infoset, action) moves so far
    path: tuple  # every edge label from the root


@dataclass(frozen=True)
class Infoset:
    id: str
    player: int
    actions: tuple
    nodes: tuple
    history: tuple  # own moves leading to it (first node's, checked for recall)


@dataclass(frozen=True)
class TerminalInfo:
    id: str
    payoff: tuple
    chance_prob: Fraction
    moves: tuple  # (player-1 moves, player-2 moves) on the path


class GameTree:
    """An immutable game tree with precomputed indices."""

    def __init__(self, root: Node):
        self.root = root
        self.nodes: dict[str, NodeInfo] = {}
        self.infosets: dict[int, dict[str, Infoset]] = {1: {}, 2: {}}
        self.terminals: list[TerminalInfo] = []
        self._diagnostics: list[str] = []
        self._index()

    # -- construction ------------------------------------------------------

    def _index(self) -> None:
        raw: dict[tuple, list] = {}
        order: list[tuple] = []
        stack = [("", self.root, None, Fraction(1), ((), ()), ())]
        while stack:
            nid, node, parent, prob, hist, path = stack.pop()
            nid = nid or "/"
            self.nodes[nid] = NodeInfo(nid, node, parent, prob, hist, path)
            base = "" if nid == "/" else nid
            children = []
            if isinstance(node, Terminal):
                self.terminals.append(TerminalInfo(nid, node.payoff, prob, hist))
            elif isinstance(node, Chance):
                for k, (p, child) in enumerate(node.branches, start=1):
                    lab = f"c{k}"
                    children.append((f"{base}/{lab}", child, nid, prob * p, hist, path + (lab,)))
            elif isinstance(node, Decision):
                key = (node.player, node.infoset)
                if key not in raw:
                    raw[key] = []
                    order.append(key)
                raw[key].append(nid)
                for a, child in node.branches:
                    h = list(hist)
                    h[node.player - 1] = h[node.player - 1] + ((node.infoset, a),)
                    children.append((f"{base}/{a}", child, nid, prob, tuple(h), path + (a,)))
            else:
                raise TypeError(f"unknown node type {type(node).__name__}")
            stack.extend(reversed(children))
        owner: dict[str, int] = {}
        for player, iid in order:
            ids = tuple(raw[(player, iid)])
            first = self.nodes[ids[0]]
            self.infosets[player][iid] = Infoset(
                iid, player, first.node.actions, ids, first.history[player - 1]
            )
            if iid in owner and owner[iid] != player:
                self._diagnostics.append(f"infoset {iid!r} is used by both players")
            owner[iid] = player

    # -- queries -----------------------------------------------------------

    def infoset_ids(self, player: int) -> tuple:
        return tuple(self.infosets[player])

    def terminal_ids(self) -> tuple:
        return tuple(t.id for t in self.terminals)

    def action_labels_single_char(self, player: int) -> bool:
        """True when every action is one symbol, possibly primed (m, m')."""
        return all(len(a.rstrip("'\u2032")) == 1 for u in self.infosets[player].values() for a in u.actions)

    def own_history(self, player: int, node_id: str) -> tuple:
        return self.nodes[node_id].history[player - 1]

    def terminals_below(self, node_id: str) -> list:
        prefix = "" if node_id == "/" else node_id
        return [t for t in self.terminals if node_id == "/" or t.id == node_id or t.id.startswith(prefix + "/")]

    def raw_diagnostics(self) -> list:
        return list(self._diagnostics)

    def __repr__(self) -> str:
        return f"GameTree({len(self.nodes)} nodes, {len(self.terminals)} terminals)"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_tree(tree: GameTree) -> list:
    """Every violated invariant as a human-readable line; empty when valid."""
    diags = tree.raw_diagnostics()
    for info in tree.nodes.values():
        node = info.node
        if isinstance(node, Chance):
            if not node.branches:
                diags.append(f"chance node {info.id} has no branches")
                continue
            total = sum((p for p, _ in node.branches), Fraction(0))
            if total != 1:
                diags.append(f"chance distribution at {info.id} sums to {_fmt(total)}")
            for k, (p, _) in enumerate(node.branches, start=1):
                if p <= 0:
                    diags.append(f"chance branch c{k} at {info.id} has non-positive weight {_fmt(p)}")
        elif isinstance(node, Decision):
            if node.player not in (1, 2):
                diags.append(f"node {info.id} belongs to unknown player {node.player}")
            if not node.branches:
                diags.append(f"decision node {info.id} has no actions")
            if len(set(node.actions)) != len(node.actions):
                diags.append(f"decision node {info.id} repeats an action label")
    for player in (1, 2):
        for u in tree.infosets[player].values():
            for nid in u.nodes:
                n = tree.nodes[nid]
                if n.node.actions != u.actions:
                    diags.append(f"infoset {u.id!r} has inconsistent action lists at {nid}")
                if n.history[player - 1] != u.history:
                    diags.append(
                        f"perfect recall violated: infoset {u.id!r} of player {player} "
                        f"is reached after different own histories"
                    )
                    break
            visits = [iid for iid, _ in u.history]
            if u.id in visits:
                diags.append(f"perfect recall violated: infoset {u.id!r} lies on its own path")
    return diags


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Strategies and outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PureStrategy:
    """Assignment infoset -> action. Plans leave unreachable infosets out."""

    player: int
    moves: tuple  # ((infoset, action), ...) in infoset file order
    label: str = ""

    def get(self, infoset: str):
        for u, a in self.moves:
            if u == infoset:
                return a
        return None

    def as_dict(self) -> dict:
        return dict(self.moves)

    def allows(self, moves: Iterable[Move]) -> bool:
        d = dict(self.moves)
        return all(d.get(u) == a for u, a in moves)


@dataclass(frozen=True)
class BehaviorStrategy:
    player: int
    local: Mapping  # infoset -> {action: probability}

    @classmethod
    def of(cls, player: int, local: Mapping) -> "BehaviorStrategy":
        return cls(player, {u: {a: rat(p) for a, p in d.items()} for u, d in local.items()})

    def prob(self, infoset: str, action: str) -> Fraction:
        return self.local[infoset].get(action, Fraction(0))


@dataclass(frozen=True)
class Outcome:
    probs: tuple  # ((terminal id, probability), ...)

    def as_dict(self) -> dict:
        return dict(self.probs)

    def __getitem__(self, terminal: str) -> Fraction:
        return dict(self.probs)[terminal]

    def support(self) -> tuple:
        return tuple(z for z, p in self.probs if p)


def _check_behavior(tree: GameTree, b: BehaviorStrategy) -> None:
    for uid, u in tree.infosets[b.player].items():
        if uid not in b.local:
            raise ValueError(f"behavior strategy of player {b.player} misses infoset {uid!r}")
        d = b.local[uid]
        if set(d) - set(u.actions):
            raise ValueError(f"unknown actions {sorted(set(d) - set(u.actions))} at infoset {uid!r}")
        if any(p < 0 for p in d.values()) or sum(d.values()) != 1:
            raise ValueError(f"local distribution at infoset {uid!r} is not a probability vector")


def outcome_of(tree: GameTree, profile: Sequence[BehaviorStrategy]) -> Outcome:
    b1, b2 = profile
    if b1.player != 1 or b2.player != 2:
        raise ValueError("profile must be (player 1 behavior, player 2 behavior)")
    _check_behavior(tree, b1)
    _check_behavior(tree, b2)
    out = []
    for t in tree.terminals:
        p = t.chance_prob
        for b, moves in ((b1, t.moves[0]), (b2, t.moves[1])):
            for u, a in moves:
                if not p:
                    break
                p *= b.prob(u, a)
        out.append((t.id, p))
    return Outcome(tuple(out))


def expected_payoffs(tree: GameTree, outcome: Outcome) -> tuple:
    d = outcome.as_dict()
    total = [Fraction(0), Fraction(0)]
    for t in tree.terminals:
        p = d.get(t.id, Fraction(0))
        if p:
            total[0] += p * t.payoff[0]
            total[1] += p * t.payoff[1]
    return tuple(total)


def pure_behavior(tree: GameTree, s: PureStrategy) -> BehaviorStrategy:
    """Behavior form of a pure strategy; unassigned infosets play uniformly."""
    local = {}
    for uid, u in tree.infosets[s.player].items():
        a = s.get(uid)
        if a is None:
            local[uid] = {x: Fraction(1, len(u.actions)) for x in u.actions}
        else:
            local[uid] = {x: Fraction(int(x == a)) for x in u.actions}
    return BehaviorStrategy(s.player, local)


def mixed_to_behavior(tree: GameTree, player: int, mixed: Mapping) -> BehaviorStrategy:
    """Kuhn's conversion; ``mixed`` maps PureStrategy -> probability."""
    local = {}
    items = [(s, rat(w)) for s, w in mixed.items() if rat(w)]
    for uid, u in tree.infosets[player].items():
        reach = [(s, w) for s, w in items if s.allows(u.history)]
        mass = sum((w for _, w in reach), Fraction(0))
        if not mass:
            local[uid] = {a: Fraction(1, len(u.actions)) for a in u.actions}
            continue
        dist = {a: Fraction(0) for a in u.actions}
        unassigned = Fraction(0)
        for s, w in reach:
            a = s.get(uid)
            if a is None:
                unassigned += w
            else:
                dist[a] += w
        if unassigned:
            # a plan reaching u must assign it; only full-strategy mixtures get here otherwise
            raise ValueError(f"mixture contains a plan that reaches {uid!r} without choosing there")
        local[uid] = {a: v / mass for a, v in dist.items()}
    return BehaviorStrategy(player, local)


# ---------------------------------------------------------------------------
# Normal form
# ---------------------------------------------------------------------------


def pure_strategies(tree: GameTree, player: int) -> list:
    """Every full assignment, in lexicographic infoset/action order."""
    us = list(tree.infosets[player].values())
    out = []
    for combo in itertools.product(*[u.actions for u in us]):
        out.append(PureStrategy(player, tuple((u.id, a) for u, a in zip(us, combo))))
    return _labelled(tree, player, out)


def reduced_plans(tree: GameTree, player: int) -> list:
    """Plans: actions only at infosets not ruled out by the player's own moves."""
    us = list(tree.infosets[player].values())
    plans: list[tuple] = [()]
    for u in us:
        nxt = []
        for plan in plans:
            d = dict(plan)
            if all(d.get(v) == a for v, a in u.history):
                nxt.extend(plan + ((u.id, a),) for a in u.actions)
            else:
                nxt.append(plan)
        plans = nxt
    return _labelled(tree, player, [PureStrategy(player, p) for p in plans])


def _labelled(tree: GameTree, player: int, strategies: list) -> list:
    sep = "" if tree.action_labels_single_char(player) else "-"
    labels = [sep.join(a for _, a in s.moves) or "*" for s in strategies]
    if len(set(labels)) != len(labels):
        labels = [",".join(f"{u}:{a}" for u, a in s.moves) for s in strategies]
    return [PureStrategy(s.player, s.moves, l) for s, l in zip(strategies, labels)]


@dataclass(frozen=True)
class TreeNormalForm:
    game: BimatrixGame
    strategies: tuple  # (player-1 strategies, player-2 strategies)

    def strategy(self, player: int, label: str) -> PureStrategy:
        for s in self.strategies[player - 1]:
            if s.label == label:
                return s
        raise KeyError(label)


def reach_sets(tree: GameTree, strategies: Sequence[PureStrategy]) -> list:
    """For each strategy the indices of terminals it does not rule out."""
    if not strategies:
        return []
    k = strategies[0].player - 1
    out = []
    for s in strategies:
        d = s.as_dict()
        out.append(frozenset(i for i, t in enumerate(tree.terminals) if all(d.get(u) == a for u, a in t.moves[k])))
    return out


def normal_form(tree: GameTree, plans: bool = False) -> TreeNormalForm:
    """Induced bimatrix game over pure strategies (or reduced plans)."""
    enum = reduced_plans if plans else pure_strategies
    s1, s2 = enum(tree, 1), enum(tree, 2)
    r1, r2 = reach_sets(tree, s1), reach_sets(tree, s2)
    terms = tree.terminals
    A, B = [], []
    for a in r1:
        ra, rb = [], []
        for b in r2:
            pa = pb = Fraction(0)
            for i in a & b:
                t = terms[i]
                pa += t.chance_prob * t.payoff[0]
                pb += t.chance_prob * t.payoff[1]
            ra.append(pa)
            rb.append(pb)
        A.append(tuple(ra))
        B.append(tuple(rb))
    game = BimatrixGame(tuple(s.label for s in s1), tuple(s.label for s in s2), tuple(A), tuple(B))
    return TreeNormalForm(game, (tuple(s1), tuple(s2)))


def profile_outcome(tree: GameTree, nf: TreeNormalForm, x: Sequence[Fraction], y: Sequence[Fraction]) -> Outcome:
    """Outcome of a mixed profile over the normal form's strategies."""
    r1 = reach_sets(tree, nf.strategies[0])
    r2 = reach_sets(tree, nf.strategies[1])
    probs = [Fraction(0)] * len(tree.terminals)
    w1 = [Fraction(0)] * len(tree.terminals)
    w2 = [Fraction(0)] * len(tree.terminals)
    for xi, reach in zip(x, r1):
        if xi:
            for i in reach:
                w1[i] += xi
    for yj, reach in zip(y, r2):
        if yj:
            for i in reach:
                w2[i] += yj
    for i, t in enumerate(tree.terminals):
        probs[i] = t.chance_prob * w1[i] * w2[i]
    return Outcome(tuple((t.id, p) for t, p in zip(tree.terminals, probs)))
