"""Exact tree computations for a game and a profile.

All sweeps are level-synchronous over the breadth-first node arrays of
:class:`~cfr_alt.game.Game`: reach probabilities flow down one level at a
time, expected values flow back up with ``np.bincount``.  ``brute_force_cfv``
is the independent check for ``counterfactual_values``: it walks every
terminal's root path separately and shares nothing with the sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import PLAYERS, BehaviorStrategy, Chance, Decision, Game, Profile

SIGN = {1: 1.0, 2: -1.0}


@dataclass(frozen=True, eq=False)
class ReachDecomposition:
    """Per-node reach probabilities, split by who made the moves."""

    total: np.ndarray
    player_1: np.ndarray
    player_2: np.ndarray
    chance: np.ndarray

    def own(self, player: int) -> np.ndarray:
        return self.player_1 if player == 1 else self.player_2

    def external(self, player: int) -> np.ndarray:
        return self.own(3 - player) * self.chance


@dataclass(frozen=True, eq=False)
class CfvTable:
    """Counterfactual action values of one player, indexed like its strategy."""

    game: Game
    player: int
    values: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        I = self.game.infoset(name)
        return self.values[I.local.start : I.local.stop]


def edge_probs(game: Game, profile: Profile) -> np.ndarray:
    """Probability of the edge into every node (1 at the root)."""
    probs = game.chance_prob.copy()
    flat = profile.flat
    mask = game.child_slot >= 0
    probs[mask] = flat[game.child_slot[mask]]
    return probs


def _push_down(game: Game, factor: np.ndarray) -> np.ndarray:
    out = np.ones_like(factor)
    for start, stop in game.levels[1:]:
        out[..., start:stop] = out[..., game.parent[start:stop]] * factor[..., start:stop]
    return out


def _pull_up(game: Game, edge: np.ndarray) -> np.ndarray:
    """Expected Player 1 utility below every node."""
    ev = game.u1.copy()
    levels = game.levels
    for k in range(len(levels) - 1, 0, -1):
        start, stop = levels[k]
        pstart, pstop = levels[k - 1]
        ev[pstart:pstop] += np.bincount(
            game.parent[start:stop] - pstart,
            weights=edge[start:stop] * ev[start:stop],
            minlength=pstop - pstart,
        )
    return ev


def reach(game: Game, profile: Profile) -> ReachDecomposition:
    edge = edge_probs(game, profile)
    pa = game.parent_actor
    factors = np.ones((4, game.num_nodes))
    factors[0] = edge
    factors[1] = np.where(pa == 1, edge, 1.0)
    factors[2] = np.where(pa == 2, edge, 1.0)
    factors[3] = np.where((pa != 1) & (pa != 2), edge, 1.0)
    total, p1, p2, ch = _push_down(game, factors)
    return ReachDecomposition(total, p1, p2, ch)


def conditional_reach(game: Game, profile: Profile, node: int) -> np.ndarray:
    """Probability of reaching every descendant of ``node`` given ``node``."""
    edge = edge_probs(game, profile)
    out = np.zeros(game.num_nodes)
    out[node] = 1.0
    stack = [node]
    while stack:
        i = stack.pop()
        for c in game.children[i]:
            out[c] = out[i] * edge[c]
            stack.append(c)
    return out


def expected_utility(game: Game, profile: Profile, player: int = 1) -> float:
    return SIGN[player] * float(_pull_up(game, edge_probs(game, profile))[0])


def counterfactual_values(game: Game, profile: Profile, player: int) -> CfvTable:
    """For every infoset action: sum over its histories of external reach
    times the expected utility after taking the action."""
    edge = edge_probs(game, profile)
    ev = _pull_up(game, edge)
    ext = _push_down(game, np.where(game.parent_actor == player, 1.0, edge))
    idx = game.edge_nodes[player]
    weights = SIGN[player] * ext[game.parent[idx]] * ev[idx]
    local = game.child_slot[idx] - game.slot_offset[player]
    values = np.bincount(local, weights=weights, minlength=game.player_slots[player])
    return CfvTable(game, player, values)


def brute_force_cfv(game: Game, profile: Profile, player: int) -> CfvTable:
    """Literal double sum over infoset histories and the terminals below
    each action, recomputing every path product from the node objects."""
    paths = []
    for z in game.terminals:
        steps = []
        node = int(z)
        while game.parent[node] >= 0:
            steps.append((int(game.parent[node]), int(game.parent_action[node])))
            node = int(game.parent[node])
        paths.append((int(z), steps[::-1]))

    def prob(node_idx: int, action: int) -> float:
        node = game.nodes[node_idx]
        if isinstance(node, Chance):
            return node.probs[action]
        assert isinstance(node, Decision)
        return float(profile.strategy(node.player)[node.infoset][action])

    by_name = {}
    for I in game.infosets_of(player):
        out = np.zeros(len(I.actions))
        members = set(I.nodes)
        for a in range(len(I.actions)):
            total = 0.0
            for z, steps in paths:
                for k, (h, b) in enumerate(steps):
                    if h in members and b == a:
                        ext = 1.0
                        own_below = 1.0
                        for j, (m, c) in enumerate(steps):
                            mover = game.nodes[m]
                            if isinstance(mover, Decision) and mover.player == player:
                                if j > k:
                                    own_below *= prob(m, c)
                            else:
                                ext *= prob(m, c)
                        total += ext * own_below * SIGN[player] * game.nodes[z].u1  # type: ignore[union-attr]
            out[a] = total
        by_name[I.name] = out
    values = np.zeros(game.player_slots[player])
    for I in game.infosets_of(player):
        values[I.local.start : I.local.stop] = by_name[I.name]
    return CfvTable(game, player, values)


def best_response(game: Game, opponent: BehaviorStrategy, player: int) -> tuple[BehaviorStrategy, float]:
    """Exact pure best response and its expected utility.

    At each own infoset the action maximising the external-reach-weighted
    value of the subtree is chosen; ties go to the earliest action.
    """
    if opponent.player != 3 - player:
        raise ValueError("opponent strategy must belong to the other player")
    dummy = game.uniform(player)
    profile = Profile(dummy, opponent) if player == 1 else Profile(opponent, dummy)
    ext = reach(game, profile).external(player).tolist()
    sign = SIGN[player]
    u1 = game.u1.tolist()
    actor = game.actor.tolist()
    children = game.children
    infoset_of = game.infoset_of.tolist()
    infosets = game.infosets

    node_value: dict[int, float] = {}
    choice: dict[int, int] = {}

    def value(n: int) -> float:
        if n in node_value:
            return node_value[n]
        if actor[n] == player:
            v = value(children[n][choose(infoset_of[n])])
        elif actor[n] < 0:
            v = sign * ext[n] * u1[n]
        else:
            v = 0.0
            for c in children[n]:
                v += value(c)
        node_value[n] = v
        return v

    def choose(i: int) -> int:
        if i in choice:
            return choice[i]
        I = infosets[i]
        best, best_v = 0, -np.inf
        for a in range(len(I.actions)):
            v = 0.0
            for h in I.nodes:
                v += value(children[h][a])
            if v > best_v:
                best, best_v = a, v
        choice[i] = best
        return best

    total = value(0)
    probs = np.zeros(game.player_slots[player])
    for I in game.infosets_of(player):
        probs[I.local.start + choose(I.index)] = 1.0
    return BehaviorStrategy(game, player, probs), float(total)


def exploitability(game: Game, profile: Profile) -> float:
    _, v1 = best_response(game, profile.strategy_2, 1)
    _, v2 = best_response(game, profile.strategy_1, 2)
    return v1 + v2


def infoset_reach(strategy: BehaviorStrategy) -> np.ndarray:
    """Own reach of every infoset of the strategy's player, summed over its
    histories, broadcast to the infoset's local slots."""
    game, p = strategy.game, strategy.player
    factor = np.ones(game.num_nodes)
    idx = game.edge_nodes[p]
    factor[idx] = strategy.probs[game.child_slot[idx] - game.slot_offset[p]]
    own = _push_down(game, factor)
    dec = game.decision_nodes[p]
    per_infoset = np.bincount(
        game.local_infoset[dec], weights=own[dec], minlength=len(game.segment_sizes[p])
    )
    return per_infoset[game.segments[p]]


def realization_plan(strategy: BehaviorStrategy) -> np.ndarray:
    """Infoset reach times action probability, per local slot."""
    return infoset_reach(strategy) * strategy.probs


def strategy_from_realization(game: Game, player: int, mass: np.ndarray) -> BehaviorStrategy:
    """Normalise accumulated realization mass per infoset; uniform where empty."""
    seg, sizes = game.segments[player], game.segment_sizes[player]
    totals = np.bincount(seg, weights=mass, minlength=len(sizes))[seg]
    safe = np.where(totals > 0, totals, 1.0)
    probs = np.where(totals > 0, mass / safe, 1.0 / sizes[seg])
    return BehaviorStrategy(game, player, probs)


def average_strategy(
    strategies: Sequence[BehaviorStrategy], weights: Sequence[float] | None = None
) -> BehaviorStrategy:
    """Realization-weighted average: the behavioural strategy equivalent to
    playing ``strategies[i]`` with probability proportional to ``weights[i]``."""
    if not strategies:
        raise ValueError("cannot average an empty sequence")
    if weights is None:
        weights = [1.0] * len(strategies)
    if len(weights) != len(strategies):
        raise ValueError("weights and strategies differ in length")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    game, player = strategies[0].game, strategies[0].player
    mass = np.zeros(game.player_slots[player])
    for w, s in zip(weights, strategies):
        if s.player != player:
            raise ValueError("strategies of different players")
        mass += w * realization_plan(s)
    return strategy_from_realization(game, player, mass)


def designated_profiles(profiles: Sequence[Profile], player: int, alternating: bool) -> list[Profile]:
    """Profiles whose utilities enter ``player``'s regret after ``len-1`` steps.

    Player 1 (and everyone under simultaneous updates) is scored on
    ``profiles[i]`` for ``i < t``; under alternating updates Player 2 is
    scored against Player 1's already-updated strategy.
    """
    t = len(profiles) - 1
    if t < 1:
        raise ValueError("need at least two profiles (one step)")
    if player == 2 and alternating:
        return [Profile(profiles[i + 1].strategy_1, profiles[i].strategy_2) for i in range(t)]
    return list(profiles[:t])


def average_regret(
    game: Game,
    profiles: Sequence[Profile],
    player: int,
    alternating: bool = True,
    weights: Sequence[float] | None = None,
) -> float:
    """Best-response value against the opponent's average strategy minus the
    (weighted) mean utility actually received."""
    seq = designated_profiles(profiles, player, alternating)
    if weights is None:
        weights = [1.0] * len(seq)
    avg = average_strategy([s.strategy(3 - player) for s in seq], weights)
    _, best = best_response(game, avg, player)
    total = sum(w * expected_utility(game, s, player) for w, s in zip(weights, seq))
    return best - total / sum(weights)


__all__ = [
    "PLAYERS",
    "CfvTable",
    "ReachDecomposition",
    "average_regret",
    "average_strategy",
    "best_response",
    "brute_force_cfv",
    "conditional_reach",
    "counterfactual_values",
    "designated_profiles",
    "edge_probs",
    "expected_utility",
    "exploitability",
    "infoset_reach",
    "reach",
    "realization_plan",
    "strategy_from_realization",
]
