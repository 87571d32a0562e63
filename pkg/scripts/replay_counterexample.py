"""Forced alternating sequence on the two-move counterexample game.

Prints, for several horizons t = 2T, the average regrets, the mean
improvement term and the exploitability of the output average, next to the
same quantities for an actual CFR+ run on the same game.

    python scripts/replay_counterexample.py --T 1 5 50 500
"""

import argparse

from cfr_alt.builders import counterexample_game
from cfr_alt.solver import SolverConfig, counterexample_sequence, replay_forced_sequence, run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--T", type=int, nargs="+", default=[1, 5, 50, 500])
    args = parser.parse_args()

    game = counterexample_game()
    print(f"{'source':<10}{'t':>6}{'regret_1':>12}{'regret_2':>12}{'improvement':>14}{'expl':>12}")
    for T in args.T:
        t = 2 * T
        forced = replay_forced_sequence(game, counterexample_sequence(game, t), stride=t).rows[-1]
        solved = run(game, SolverConfig.cfr_plus(iterations=t, stride=t)).rows[-1]
        for source, row in (("forced", forced), ("cfr+", solved)):
            print(
                f"{source:<10}{t:>6}{row.avg_regret_1:>12.4g}{row.avg_regret_2:>12.4g}"
                f"{row.improvement:>14.4g}{row.expl:>12.4g}"
            )


if __name__ == "__main__":
    main()
