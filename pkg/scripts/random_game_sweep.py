"""Certify alternating CFR+ on a range of seeded random games.

For each seed, runs linearly averaged alternating CFR+ and prints every
verification report, then a pass count.

    python scripts/random_game_sweep.py --seeds 0 50 --iters 500
"""

import argparse

from cfr_alt.builders import seeded_random_game
from cfr_alt.solver import SolverConfig
from cfr_alt.verifier import certify_run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, nargs=2, default=[0, 20], metavar=("FIRST", "STOP"))
    parser.add_argument("--iters", type=int, default=500)
    args = parser.parse_args()

    passed = total = 0
    for seed in range(*args.seeds):
        game = seeded_random_game(seed)
        for report in certify_run(game, SolverConfig.cfr_plus(iterations=args.iters), subject=f"seed {seed}"):
            print(report.line())
            passed += report.passed
            total += 1
    print(f"{passed}/{total} checks passed")


if __name__ == "__main__":
    main()
