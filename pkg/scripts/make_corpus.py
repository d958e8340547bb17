"""Write the generated corpus files: stage games and their twice-repeated versions."""

from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

from hyperindex.corpus import CORPUS_DIR, repeated_tree, stage_tree, FIG6_STAGE, FIG8_STAGE
from hyperindex.gamefile import dump_game


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=CORPUS_DIR)
    ap.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    args = ap.parse_args()
    files = {
        "stage_fig6.game": ("Stage game with seven equilibria.", stage_tree(FIG6_STAGE)),
        "stage_fig8.game": ("Battle-of-the-sexes stage game.", stage_tree(FIG8_STAGE)),
        "repeated_fig6.game": (
            f"Twice-repeated seven-equilibrium game; player 2's first-stage payoff at (C,C) lowered by {args.epsilon}.",
            repeated_tree(FIG6_STAGE, args.epsilon),
        ),
        "repeated_fig8.game": ("Twice-repeated battle-of-the-sexes game, stage payoffs summed.", repeated_tree(FIG8_STAGE)),
    }
    for name, (comment, tree) in files.items():
        path = args.out / name
        path.write_text(f"# {comment}\n" + dump_game(tree), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
