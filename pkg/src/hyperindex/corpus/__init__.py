"""Bundled example games and builders for the generated ones."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from ..exactcore import rat
from ..gamefile import parse_game
from ..gametree import Chance, Decision, GameTree, Terminal
from ..normalform import BimatrixGame

CORPUS_DIR = Path(__file__).resolve().parent

# (row labels, column labels, payoff pairs)
FIG6_STAGE = (
    ("A", "B", "C"),
    ("A", "B", "C"),
    (((4, 4), (0, 0), (0, 0)), ((0, 0), (3, 1), (0, 0)), ((2, 2), (0, 0), (1, 3))),
)
FIG8_STAGE = (("T", "B"), ("L", "R"), (((4, 1), (0, 0)), ((0, 0), (1, 4))))

# perturbed Entry subgame used by the embedding demo: rows L', R' versus l, r
PERTURBED_ENTRY_SUBGAME = BimatrixGame.from_pairs(
    [[(3, 1), (2, 0)], [(0, 0), (1, 3)]], ("L'", "R'"), ("l", "r")
)

GAMES = (
    "entry",
    "entrymod",
    "game-fig3",
    "beer_quiche",
    "chokreps_figIV",
    "three_types",
    "spence",
    "stage_fig6",
    "repeated_fig6",
    "stage_fig8",
    "repeated_fig8",
)
DEMOS = ("entry-embedding", "entrymod-duplicates")


def stage_tree(stage) -> GameTree:
    rows, cols, table = stage
    root = Decision(
        1,
        "I",
        tuple(
            (r, Decision(2, "J", tuple((c, Terminal((rat(p[0]), rat(p[1])))) for c, p in zip(cols, line))))
            for r, line in zip(rows, table)
        ),
    )
    return GameTree(root)


def repeated_tree(stage, epsilon=0) -> GameTree:
    """Stage game played twice, payoffs summed, second stage after observing the first.

    ``epsilon`` lowers player 2's first-stage payoff at the last diagonal cell
    (``(C, C)`` in the seven-equilibrium game).
    """
    rows, cols, table = stage
    eps = rat(epsilon)
    last = (len(rows) - 1, len(cols) - 1)

    def second(i, j, base):
        tag = rows[i] + cols[j]
        return Decision(
            1,
            f"I:{tag}",
            tuple(
                (
                    r,
                    Decision(
                        2,
                        f"J:{tag}",
                        tuple(
                            (c, Terminal((base[0] + rat(p[0]), base[1] + rat(p[1]))))
                            for c, p in zip(cols, line)
                        ),
                    ),
                )
                for r, line in zip(rows, table)
            ),
        )

    branches = []
    for i, r in enumerate(rows):
        inner = []
        for j, c in enumerate(cols):
            a, b = rat(table[i][j][0]), rat(table[i][j][1])
            if (i, j) == last:
                b -= eps
            inner.append((c, second(i, j, (a, b))))
        branches.append((r, Decision(2, "J", tuple(inner))))
    return GameTree(Decision(1, "I", tuple(branches)))


def path(name: str) -> Path:
    return CORPUS_DIR / f"{name}.game"


def load(name: str, epsilon=None) -> GameTree:
    """Load a bundled game. ``epsilon`` rebuilds ``repeated_fig6`` with that tweak."""
    if name not in GAMES:
        raise KeyError(f"unknown corpus game {name!r}; choose from {', '.join(GAMES)}")
    if name == "repeated_fig6" and epsilon is not None:
        return repeated_tree(FIG6_STAGE, epsilon)
    return parse_game(path(name).read_text(encoding="utf-8"))


def entry_embedding_spec(epsilon):
    """Entry game with the perturbed subgame plugged in after the rare Nature move."""
    from ..perturblab import EmbeddingSpec

    return EmbeddingSpec(
        load("entry"),
        PERTURBED_ENTRY_SUBGAME,
        {"L'": {"In-L": 1}, "R'": {"In-R": 1}},
        {"l": {"l": 1}, "r": {"r": 1}},
        epsilon,
    )
