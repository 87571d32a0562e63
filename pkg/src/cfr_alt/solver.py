"""CFR and CFR+ with simultaneous or alternating updates.

Iteration ``t`` starts from the profile ``sigma^t`` (``sigma^0`` is uniform,
i.e. all stored values zero).  Under alternating updates Player 1 is updated
with counterfactual values of ``sigma^t`` and Player 2 with values of
``(sigma^{t+1}_1, sigma^t_2)``; under simultaneous updates both use
``sigma^t``.

Output averages, with ``w_i = 1`` (uniform) or ``w_i = i + 1`` (linear):

- alternating:  Player 1 averages ``sigma^{i+1}_1`` and Player 2 averages
  ``sigma^i_2`` over ``i = 0 .. t-1``, both with weight ``w_i``
  (so linear weights give ``sum_i i*sigma^i_1`` over ``1..t``)
- simultaneous: both players average ``sigma^i`` over ``i = 0 .. t-1``.

Averages are accumulated as realization-plan mass, so the average strategy is
the behavioural equivalent of the weighted mixture.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import game_bound
from .evaluator import (
    best_response,
    counterfactual_values,
    expected_utility,
    realization_plan,
    strategy_from_realization,
)
from .game import PLAYERS, BehaviorStrategy, Game, Profile
from .regret import RegretKind, RegretState, segment_policies, segment_update


class UpdateMode(enum.Enum):
    SIMULTANEOUS = "simultaneous"
    ALTERNATING = "alternating"


class Averaging(enum.Enum):
    UNIFORM = "uniform"
    LINEAR = "linear"


@dataclass(frozen=True)
class SolverConfig:
    minimizer: RegretKind = RegretKind.RM_PLUS
    update: UpdateMode = UpdateMode.ALTERNATING
    averaging: Averaging = Averaging.LINEAR
    iterations: int = 1000
    stride: int = 10
    record_trace: bool = False

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")

    @classmethod
    def cfr(cls, **kw) -> "SolverConfig":
        kw.setdefault("minimizer", RegretKind.RM)
        kw.setdefault("update", UpdateMode.SIMULTANEOUS)
        kw.setdefault("averaging", Averaging.UNIFORM)
        return cls(**kw)

    @classmethod
    def cfr_plus(cls, **kw) -> "SolverConfig":
        return cls(**kw)

    @property
    def alternating(self) -> bool:
        return self.update is UpdateMode.ALTERNATING


@dataclass(frozen=True, eq=False)
class UpdateStep:
    """One single-player update: ``before`` -> ``after`` against ``opponent``,
    the opponent strategy whose values drove the update."""

    t: int
    player: int
    before: BehaviorStrategy
    after: BehaviorStrategy
    opponent: BehaviorStrategy

    def profile(self, which: str) -> Profile:
        mine = self.before if which == "before" else self.after
        return Profile(mine, self.opponent) if self.player == 1 else Profile(self.opponent, mine)


@dataclass
class Trace:
    profiles: list[Profile] = field(default_factory=list)
    updates: list[UpdateStep] = field(default_factory=list)


@dataclass(frozen=True)
class Snapshot:
    t: int
    expl: float
    avg_regret_1: float
    avg_regret_2: float
    improvement: float
    bound: float


CSV_HEADER = ("t", "expl", "avg_regret_1", "avg_regret_2", "improvement", "bound")


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass
class SolveRecord:
    """Snapshot table of a run plus per-step improvement terms.

    ``improvement`` in a snapshot is the (weighted) mean of the per-step
    terms ``u1(sigma^{i+1}_1, sigma^i_2) - u1(sigma^i)`` so far, so every row
    satisfies ``avg_regret_1 + avg_regret_2 = expl + improvement`` for
    alternating runs.
    """

    rows: list[Snapshot]
    improvements: np.ndarray
    average: Profile
    trace: Trace | None = None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([str(r.t), *(_fmt(getattr(r, k)) for k in CSV_HEADER[1:])])
        return buf.getvalue()


class _Tracker:
    """Running weighted averages and utility sums over a profile sequence."""

    def __init__(self, game: Game, alternating: bool, averaging: Averaging):
        self.game = game
        self.alternating = alternating
        self.linear = averaging is Averaging.LINEAR
        self.mass = {p: np.zeros(game.player_slots[p]) for p in PLAYERS}
        self.weight = 0.0
        self.sum_u1 = 0.0
        self.sum_u2 = 0.0
        self.sum_improvement = 0.0
        self.improvements: list[float] = []
        self.t = 0

    def observe(self, current: Profile, nxt: Profile) -> None:
        w = float(self.t + 1) if self.linear else 1.0
        game = self.game
        mid = Profile(nxt.strategy_1, current.strategy_2)
        u_now = expected_utility(game, current, 1)
        u_mid = expected_utility(game, mid, 1)
        if self.alternating:
            self.mass[1] += w * realization_plan(nxt.strategy_1)
            self.sum_u2 += w * -u_mid
        else:
            self.mass[1] += w * realization_plan(current.strategy_1)
            self.sum_u2 += w * -u_now
        self.mass[2] += w * realization_plan(current.strategy_2)
        self.sum_u1 += w * u_now
        self.sum_improvement += w * (u_mid - u_now)
        self.improvements.append(u_mid - u_now)
        self.weight += w
        self.t += 1

    def average(self) -> Profile:
        return Profile(
            strategy_from_realization(self.game, 1, self.mass[1]),
            strategy_from_realization(self.game, 2, self.mass[2]),
        )

    def snapshot(self) -> Snapshot:
        avg = self.average()
        _, br1 = best_response(self.game, avg.strategy_2, 1)
        _, br2 = best_response(self.game, avg.strategy_1, 2)
        return Snapshot(
            t=self.t,
            expl=br1 + br2,
            avg_regret_1=br1 - self.sum_u1 / self.weight,
            avg_regret_2=br2 - self.sum_u2 / self.weight,
            improvement=self.sum_improvement / self.weight,
            bound=game_bound(self.game, self.t),
        )


@dataclass
class SolverState:
    """Stored regret(-like) values, the current profile and the averages.

    ``stored[p]`` packs one regret vector per infoset of player ``p`` into
    the player's slot layout.  Single writer: only :func:`iterate` mutates.
    """

    game: Game
    kind: RegretKind
    stored: dict[int, np.ndarray]
    profile: Profile
    tracker: _Tracker
    trace: Trace | None = None

    @classmethod
    def initial(cls, game: Game, config: SolverConfig) -> "SolverState":
        stored = {p: np.zeros(game.player_slots[p]) for p in PLAYERS}
        state = cls(
            game,
            config.minimizer,
            stored,
            Profile(game.uniform(1), game.uniform(2)),
            _Tracker(game, config.alternating, config.averaging),
            Trace() if config.record_trace else None,
        )
        if state.trace is not None:
            state.trace.profiles.append(state.profile)
        return state

    @property
    def t(self) -> int:
        return self.tracker.t

    def policy(self, player: int) -> BehaviorStrategy:
        game = self.game
        probs = segment_policies(self.stored[player], game.segments[player], game.segment_sizes[player])
        return BehaviorStrategy(game, player, probs)

    def regret_state(self, infoset: str) -> RegretState:
        I = self.game.infoset(infoset)
        return RegretState(self.stored[I.player][I.local.start : I.local.stop].copy(), self.kind)

    def _advance(self, player: int, values: np.ndarray) -> BehaviorStrategy:
        game = self.game
        self.stored[player] = segment_update(
            self.stored[player], values, game.segments[player], game.segment_sizes[player], self.kind
        )
        return self.policy(player)


def iterate(state: SolverState, game: Game, config: SolverConfig) -> SolverState:
    """Advance ``state`` by one CFR/CFR+ iteration (in place)."""
    t = state.t
    current = state.profile
    if config.alternating:
        cfv1 = counterfactual_values(game, current, 1).values
        s1 = state._advance(1, cfv1)
        cfv2 = counterfactual_values(game, Profile(s1, current.strategy_2), 2).values
        s2 = state._advance(2, cfv2)
        opponents = {1: current.strategy_2, 2: s1}
    else:
        cfv1 = counterfactual_values(game, current, 1).values
        cfv2 = counterfactual_values(game, current, 2).values
        s1 = state._advance(1, cfv1)
        s2 = state._advance(2, cfv2)
        opponents = {1: current.strategy_2, 2: current.strategy_1}
    nxt = Profile(s1, s2)
    state.tracker.observe(current, nxt)
    state.profile = nxt
    if state.trace is not None:
        state.trace.profiles.append(nxt)
        for p, after in ((1, s1), (2, s2)):
            state.trace.updates.append(UpdateStep(t, p, current.strategy(p), after, opponents[p]))
    return state


def _snapshot_times(total: int, stride: int) -> set[int]:
    times = set(range(stride, total + 1, stride))
    times.add(total)
    return times


def run(game: Game, config: SolverConfig) -> SolveRecord:
    state = SolverState.initial(game, config)
    rows = []
    times = _snapshot_times(config.iterations, config.stride)
    for _ in range(config.iterations):
        iterate(state, game, config)
        if state.t in times:
            rows.append(state.tracker.snapshot())
    return SolveRecord(rows, np.array(state.tracker.improvements), state.tracker.average(), state.trace)


def replay_forced_sequence(
    game: Game,
    profiles: Sequence[Profile],
    alternating: bool = True,
    averaging: Averaging = Averaging.UNIFORM,
    stride: int = 1,
) -> SolveRecord:
    """Score an externally imposed sequence ``sigma^0 .. sigma^t`` exactly as
    :func:`run` scores its own iterates, bypassing the regret minimizers."""
    if len(profiles) < 2:
        raise ValueError("need at least two profiles")
    tracker = _Tracker(game, alternating, averaging)
    times = _snapshot_times(len(profiles) - 1, stride)
    rows = []
    for current, nxt in zip(profiles, profiles[1:]):
        tracker.observe(current, nxt)
        if tracker.t in times:
            rows.append(tracker.snapshot())
    trace = Trace(profiles=list(profiles))
    return SolveRecord(rows, np.array(tracker.improvements), tracker.average(), trace)


def pure_profile(game: Game, actions: dict[str, int]) -> Profile:
    """Profile playing the given action index at the named infosets (uniform
    elsewhere)."""
    parts = {}
    for p in PLAYERS:
        probs = game.uniform(p).probs.copy()
        for I in game.infosets_of(p):
            if I.name in actions:
                probs[I.local.start : I.local.stop] = 0.0
                probs[I.local.start + actions[I.name]] = 1.0
        parts[p] = BehaviorStrategy(game, p, probs)
    return Profile(parts[1], parts[2])


def counterexample_sequence(game: Game, steps: int) -> list[Profile]:
    """``sigma^t_X = sigma^t_Y = t mod 2`` for ``t = 0 .. steps``."""
    return [pure_profile(game, {"X": t % 2, "Y": t % 2}) for t in range(steps + 1)]


__all__ = [
    "Averaging",
    "CSV_HEADER",
    "Snapshot",
    "SolveRecord",
    "SolverConfig",
    "SolverState",
    "Trace",
    "UpdateMode",
    "UpdateStep",
    "counterexample_sequence",
    "iterate",
    "pure_profile",
    "replay_forced_sequence",
    "run",
]
