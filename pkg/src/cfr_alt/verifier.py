"""Runtime checks of the convergence guarantees on concrete runs.

Each check returns :class:`TheoremReport` objects that record how many
instances were examined and the worst violation seen.  All quantities are
recomputed through :mod:`cfr_alt.evaluator` from stored strategies, never
read back from the solver's own running sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bounds import cfr_plus_bound, game_bound
from .evaluator import (
    average_regret,
    average_strategy,
    counterfactual_values,
    designated_profiles,
    expected_utility,
    exploitability,
)
from .game import BehaviorStrategy, Game, Profile
from .regret import RegretKind, RegretState, normalized_positive, update
from .solver import Averaging, SolverConfig, UpdateMode, UpdateStep, run

ARITHMETIC_TOL = 1e-12
TREE_TOL = 1e-9

__all__ = [
    "ARITHMETIC_TOL",
    "TREE_TOL",
    "TheoremReport",
    "alternating_decomposition",
    "certify_run",
    "cfr_plus_bound",
    "check_cfr_improvement",
    "check_folk_decomposition",
    "check_rm_lemmas",
    "negative_control_updates",
]


@dataclass(frozen=True)
class TheoremReport:
    check: str
    instances: int
    worst_violation: float
    tolerance: float
    subject: str = ""

    @property
    def passed(self) -> bool:
        return self.worst_violation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        subject = f" [{self.subject}]" if self.subject else ""
        return (
            f"{self.check}{subject} instances={self.instances} "
            f"worst={self.worst_violation:.3e} tol={self.tolerance:.0e} {status}"
        )


# -- regret-matching properties ---------------------------------------------


def check_rm_lemmas(
    seeds: Iterable[int],
    steps: int = 200,
    kinds: Sequence[RegretKind] = (RegretKind.RM, RegretKind.RM_PLUS),
    low: float = -1.0,
    high: float = 1.0,
) -> list[TheoremReport]:
    """Drive both minimizers with random value vectors and check, per step:

    - positive persistence: a positive stored value keeps one positive next step
    - no uniform relapse: once off the uniform fallback, never back on it
    - monotone increments: ``(s+'_a - s+_a)(v_a - sigma.v) >= 0`` per action
    - improvement: ``sigma^{t+1}.v^t >= sigma^t.v^t``
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    worst = {"rm-positive-persistence": 0.0, "rm-no-uniform-relapse": 0.0,
             "rm-monotone-increment": 0.0, "rm-improvement": 0.0}
    instances = 0
    for kind in kinds:
        for seed in seeds:
            rng = np.random.default_rng(seed)
            n = 2 + seed % 4
            state = RegretState.zeros(n, kind)
            left_uniform = False
            for _ in range(steps):
                values = rng.uniform(low, high, size=n)
                nxt = update(state, values)
                sigma, sigma_next = normalized_positive(state.stored), normalized_positive(nxt.stored)
                if state.has_positive and not nxt.has_positive:
                    worst["rm-positive-persistence"] = max(worst["rm-positive-persistence"], 1.0)
                left_uniform = left_uniform or state.has_positive
                if left_uniform and not nxt.has_positive:
                    worst["rm-no-uniform-relapse"] = max(worst["rm-no-uniform-relapse"], 1.0)
                gain = values - sigma @ values
                delta = np.maximum(nxt.stored, 0) - np.maximum(state.stored, 0)
                worst["rm-monotone-increment"] = max(
                    worst["rm-monotone-increment"], float(np.max(-(delta * gain), initial=0.0))
                )
                worst["rm-improvement"] = max(
                    worst["rm-improvement"], float(sigma @ values - sigma_next @ values)
                )
                state = nxt
                instances += 1
    return [TheoremReport(name, instances, w, ARITHMETIC_TOL) for name, w in worst.items()]


# -- single-player CFR updates ---------------------------------------------


def check_cfr_improvement(game: Game, updates: Sequence[UpdateStep], subject: str = "") -> list[TheoremReport]:
    """Every action value at every infoset of the updated player, and the
    player's expected utility, must not drop when its strategy moves from
    ``before`` to ``after`` against the fixed opponent strategy."""
    cfv_worst = 0.0
    root_worst = 0.0
    for step in updates:
        before, after = step.profile("before"), step.profile("after")
        v0 = counterfactual_values(game, before, step.player).values
        v1 = counterfactual_values(game, after, step.player).values
        cfv_worst = max(cfv_worst, float(np.max(v0 - v1, initial=0.0)))
        u0 = expected_utility(game, before, step.player)
        u1 = expected_utility(game, after, step.player)
        root_worst = max(root_worst, u0 - u1)
    return [
        TheoremReport("cfv-improvement", len(updates), cfv_worst, TREE_TOL, subject),
        TheoremReport("root-improvement", len(updates), root_worst, TREE_TOL, subject),
    ]


def negative_control_updates(game: Game, iterations: int = 5) -> list[UpdateStep]:
    """Alternating updates that jump to the *worst* action at every infoset.

    Not a regret-matching update, so the improvement checks must flag it.
    """
    profile = game.uniform_profile()
    steps: list[UpdateStep] = []
    for t in range(iterations):
        for p in (1, 2):
            cfv = counterfactual_values(game, profile, p).values
            probs = np.zeros_like(cfv)
            for I in game.infosets_of(p):
                block = cfv[I.local.start : I.local.stop]
                probs[I.local.start + int(np.argmin(block))] = 1.0
            after = BehaviorStrategy(game, p, probs)
            steps.append(UpdateStep(t, p, profile.strategy(p), after, profile.strategy(3 - p)))
            profile = profile.replace(after)
    return steps


# -- regret / exploitability decomposition ---------------------------------


def _weights(t: int, averaging: Averaging) -> list[float]:
    return [float(i + 1) for i in range(t)] if averaging is Averaging.LINEAR else [1.0] * t


@dataclass(frozen=True)
class Decomposition:
    t: int
    regret_1: float
    regret_2: float
    improvement: float
    expl: float

    @property
    def residual(self) -> float:
        """``r1 + r2 - improvement - expl``; zero by algebra."""
        return self.regret_1 + self.regret_2 - self.improvement - self.expl


def alternating_decomposition(
    game: Game, profiles: Sequence[Profile], averaging: Averaging = Averaging.UNIFORM
) -> Decomposition:
    """Regrets, mean improvement and exploitability of the output average for
    an alternating-update sequence ``sigma^0 .. sigma^t``."""
    t = len(profiles) - 1
    if t < 1:
        raise ValueError("trace too short: need at least one step")
    w = _weights(t, averaging)
    avg1 = average_strategy([profiles[i + 1].strategy_1 for i in range(t)], w)
    avg2 = average_strategy([profiles[i].strategy_2 for i in range(t)], w)
    expl = exploitability(game, Profile(avg1, avg2))
    r1 = average_regret(game, profiles, 1, alternating=True, weights=w)
    r2 = average_regret(game, profiles, 2, alternating=True, weights=w)
    mids = designated_profiles(profiles, 2, alternating=True)
    gain = sum(
        wi * (expected_utility(game, m, 1) - expected_utility(game, s, 1))
        for wi, m, s in zip(w, mids, profiles[:t])
    )
    return Decomposition(t, r1, r2, gain / sum(w), expl)


def check_folk_decomposition(
    game: Game,
    profiles: Sequence[Profile],
    averaging: Averaging = Averaging.UNIFORM,
    checkpoints: Sequence[int] | None = None,
    subject: str = "",
) -> TheoremReport:
    """Check ``expl = r1 + r2 - improvement`` (to 1e-9) and the resulting
    bound ``expl <= eps1 + eps2 - improvement`` with ``eps_p = r_p``."""
    t = len(profiles) - 1
    if t < 1:
        raise ValueError("trace too short: need at least one step")
    checkpoints = [t] if checkpoints is None else list(checkpoints)
    worst = 0.0
    for c in checkpoints:
        d = alternating_decomposition(game, profiles[: c + 1], averaging)
        slack = d.expl - (d.regret_1 + d.regret_2 - d.improvement)
        worst = max(worst, abs(d.residual), slack)
    return TheoremReport("alternating-folk-identity", len(checkpoints), worst, TREE_TOL, subject)


# -- end-to-end certification -------------------------------------------------


def check_bound(record_rows, game: Game, subject: str = "") -> TheoremReport:
    worst = 0.0
    for row in record_rows:
        bound = game_bound(game, row.t)
        if math.isnan(bound):
            continue
        worst = max(worst, row.expl - bound)
    return TheoremReport("cfr-plus-bound", len(record_rows), worst, TREE_TOL, subject)


def certify_run(
    game: Game,
    config: SolverConfig | None = None,
    folk_checkpoints: int = 4,
    subject: str = "",
) -> list[TheoremReport]:
    """Run linearly averaged alternating CFR+ and check the exploitability
    bound at every snapshot, every single-player improvement, and the
    weighted regret decomposition at a few checkpoints."""
    config = config or SolverConfig.cfr_plus()
    if (
        config.minimizer is not RegretKind.RM_PLUS
        or config.update is not UpdateMode.ALTERNATING
        or config.averaging is not Averaging.LINEAR
    ):
        raise ValueError("certification needs CFR+ with alternating updates and linear averaging")
    if not config.record_trace:
        config = SolverConfig(**{**config.__dict__, "record_trace": True})
    record = run(game, config)
    assert record.trace is not None
    t = config.iterations
    marks = sorted({max(1, round(t * (j + 1) / folk_checkpoints)) for j in range(folk_checkpoints)})
    reports = [check_bound(record.rows, game, subject)]
    reports += check_cfr_improvement(game, record.trace.updates, subject)
    reports.append(
        check_folk_decomposition(game, record.trace.profiles, Averaging.LINEAR, marks, subject)
    )
    return reports
