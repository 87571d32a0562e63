from __future__ import annotations

import math

from .game import Game, utility_bound


def cfr_plus_bound(t: int, infoset_count: int, utility_range: float, max_actions: int) -> float:
    """Exploitability bound ``2 |I| l sqrt(k / t)`` for linearly averaged
    alternating CFR+."""
    if t <= 0 or infoset_count <= 0 or utility_range <= 0 or max_actions <= 0:
        raise ValueError("all bound arguments must be positive")
    return 2.0 * infoset_count * utility_range * math.sqrt(max_actions / t)


def game_bound(game: Game, t: int) -> float:
    """The bound for ``game`` after ``t`` iterations; NaN for degenerate games
    (no decision infosets, or no positive Player 1 payoff)."""
    count = game.decision_infoset_count
    l = utility_bound(game)
    if count == 0 or l <= 0:
        return math.nan
    return cfr_plus_bound(t, count, l, game.max_actions)
