"""Brute-force references for small games.

Everything here works from terminal root-paths and exhaustive pure-strategy
enumeration, without touching the tree sweeps in :mod:`cfr_alt.evaluator`.
Costs are exponential in the number of infosets, so callers cap them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linprog

from .game import BehaviorStrategy, Chance, Decision, Game, Terminal

MAX_PURE_STRATEGIES = 1 << 16


@dataclass(frozen=True)
class TerminalPath:
    u1: float
    chance: float
    moves: dict  # player -> tuple of (infoset name, action index)


def terminal_paths(game: Game) -> list[TerminalPath]:
    out: list[TerminalPath] = []

    def walk(node, chance: float, moves: dict) -> None:
        if isinstance(node, Terminal):
            out.append(TerminalPath(node.u1, chance, {p: tuple(m) for p, m in moves.items()}))
        elif isinstance(node, Chance):
            for p, child in zip(node.probs, node.children):
                walk(child, chance * p, moves)
        else:
            assert isinstance(node, Decision)
            for a, child in enumerate(node.children):
                nxt = dict(moves)
                nxt[node.player] = moves[node.player] + [(node.infoset, a)]
                walk(child, chance, nxt)

    walk(game.root, 1.0, {1: [], 2: []})
    return out


def pure_strategy_table(game: Game, player: int, limit: int = MAX_PURE_STRATEGIES) -> tuple[list[str], np.ndarray]:
    """Infoset names and an ``(n_pure, n_infosets)`` array of action choices."""
    infosets = game.infosets_of(player)
    count = 1
    for I in infosets:
        count *= len(I.actions)
    if count > limit:
        raise ValueError(f"player {player} has {count} pure strategies (limit {limit})")
    names = [I.name for I in infosets]
    table = np.array(list(product(*(range(len(I.actions)) for I in infosets))), dtype=np.intp)
    return names, table.reshape(count, len(infosets))


def _consistency(paths: list[TerminalPath], player: int, names: list[str], table: np.ndarray) -> np.ndarray:
    """``C[s, z]`` is True when pure strategy ``s`` plays every own move on path ``z``."""
    col = {name: j for j, name in enumerate(names)}
    out = np.ones((table.shape[0], len(paths)), dtype=bool)
    for z, path in enumerate(paths):
        for name, a in path.moves[player]:
            out[:, z] &= table[:, col[name]] == a
    return out


def enumerated_best_response_value(game: Game, opponent: BehaviorStrategy, player: int) -> float:
    """Maximum expected utility over every pure strategy of ``player``."""
    paths = terminal_paths(game)
    names, table = pure_strategy_table(game, player)
    sign = 1.0 if player == 1 else -1.0
    weights = np.empty(len(paths))
    for z, path in enumerate(paths):
        w = path.chance * sign * path.u1
        for name, a in path.moves[3 - player]:
            w *= float(opponent[name][a])
        weights[z] = w
    utilities = _consistency(paths, player, names, table) @ weights
    return float(utilities.max())


def payoff_matrix(game: Game) -> np.ndarray:
    """Player 1 expected utility for every pair of pure strategies."""
    paths = terminal_paths(game)
    n1, t1 = pure_strategy_table(game, 1)
    n2, t2 = pure_strategy_table(game, 2)
    c1 = _consistency(paths, 1, n1, t1).astype(float)
    c2 = _consistency(paths, 2, n2, t2).astype(float)
    w = np.array([p.chance * p.u1 for p in paths])
    return (c1 * w) @ c2.T


def matrix_game_value(payoff: np.ndarray) -> float:
    """Value of the zero-sum matrix game for the row (maximising) player."""
    m, n = payoff.shape
    # variables: x (m mixed probs), v; maximise v  s.t.  v <= x^T A[:, j]
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-payoff.T, np.ones((n, 1))])
    a_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(n),
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * m + [(None, None)],
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"linear program failed: {res.message}")
    return float(res.x[-1])


def equilibrium_value(game: Game) -> float:
    """Player 1 game value from the normal form of ``game``."""
    return matrix_game_value(payoff_matrix(game))
