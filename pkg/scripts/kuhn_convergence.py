"""Exploitability of CFR and CFR+ variants on Kuhn poker.

Writes one CSV per configuration plus a short summary table to stdout.

    python scripts/kuhn_convergence.py --iters 10000 --outdir results/kuhn
"""

import argparse
from pathlib import Path

from cfr_alt.builders import kuhn_poker
from cfr_alt.evaluator import expected_utility
from cfr_alt.oracles import equilibrium_value
from cfr_alt.regret import RegretKind
from cfr_alt.solver import Averaging, SolverConfig, UpdateMode, run

VARIANTS = {
    "cfr_sim_uniform": SolverConfig(RegretKind.RM, UpdateMode.SIMULTANEOUS, Averaging.UNIFORM),
    "cfr_alt_uniform": SolverConfig(RegretKind.RM, UpdateMode.ALTERNATING, Averaging.UNIFORM),
    "cfrplus_sim_linear": SolverConfig(RegretKind.RM_PLUS, UpdateMode.SIMULTANEOUS, Averaging.LINEAR),
    "cfrplus_alt_uniform": SolverConfig(RegretKind.RM_PLUS, UpdateMode.ALTERNATING, Averaging.UNIFORM),
    "cfrplus_alt_linear": SolverConfig(RegretKind.RM_PLUS, UpdateMode.ALTERNATING, Averaging.LINEAR),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--iters", type=int, default=10_000)
    parser.add_argument("--stride", type=int, default=100)
    parser.add_argument("--outdir", type=Path, default=Path("results/kuhn"))
    args = parser.parse_args()

    game = kuhn_poker()
    value = equilibrium_value(game)
    args.outdir.mkdir(parents=True, exist_ok=True)
    print(f"game value (normal-form LP): {value:.9f}")
    print(f"{'variant':<22}{'final expl':>14}{'bound':>10}{'u1(avg)':>14}")
    for name, base in VARIANTS.items():
        config = SolverConfig(base.minimizer, base.update, base.averaging, args.iters, args.stride)
        record = run(game, config)
        (args.outdir / f"{name}.csv").write_text(record.to_csv())
        last = record.rows[-1]
        u1 = expected_utility(game, record.average, 1)
        print(f"{name:<22}{last.expl:>14.3e}{last.bound:>10.4f}{u1:>14.9f}")


if __name__ == "__main__":
    main()
