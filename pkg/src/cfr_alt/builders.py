"""Built-in games: the two-move counterexample, Kuhn poker, seeded random games."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .game import Chance, Decision, Game, Node, Terminal

NODE_BUDGET = 10**5


def counterexample_game() -> Game:
    """X picks 0/1, then Y picks 0/1 without seeing X; X wins 1 only on (1, 1).

    Terminals in action order are 00, 01, 10, 11 with u1 = 0, 0, 0, 1.
    """
    def y_node(x: int) -> Decision:
        return Decision(2, "Y", ("0", "1"), (Terminal(0.0), Terminal(float(x))))

    return Game(Decision(1, "X", ("0", "1"), (y_node(0), y_node(1))))


KUHN_CARDS = "JQK"


def kuhn_poker() -> Game:
    """Three-card Kuhn poker with an ante of 1 and bet size 1.

    Actions are ``p`` (pass/check/fold) and ``b`` (bet/call).  Infosets are
    named ``<card>:<history>``, e.g. ``Q:pb`` is Player 1 holding the queen
    after checking and facing a bet.
    """

    def showdown(c1: int, c2: int, stake: float) -> Terminal:
        return Terminal(stake if c1 > c2 else -stake)

    def deal(c1: int, c2: int) -> Node:
        k1, k2 = KUHN_CARDS[c1], KUHN_CARDS[c2]
        after_p = Decision(
            2,
            f"{k2}:p",
            ("p", "b"),
            (
                showdown(c1, c2, 1.0),
                Decision(1, f"{k1}:pb", ("p", "b"), (Terminal(-1.0), showdown(c1, c2, 2.0))),
            ),
        )
        after_b = Decision(2, f"{k2}:b", ("p", "b"), (Terminal(1.0), showdown(c1, c2, 2.0)))
        return Decision(1, f"{k1}:", ("p", "b"), (after_p, after_b))

    deals = list(permutations(range(3), 2))
    return Game(Chance(tuple(1.0 / len(deals) for _ in deals), tuple(deal(a, b) for a, b in deals)))


def random_game(seed: int, depth: int, branching: int, node_budget: int = NODE_BUDGET) -> Game:
    """Seeded random game with perfect recall by construction.

    ``depth`` player levels alternate between Player 1 and Player 2, each
    optionally preceded by a chance level.  Every level appends one
    observation token per player: the mover sees its own action, the other
    player sees a seeded signal of it (a coarsening of the action set), and
    chance outcomes are either revealed to a player or hidden.  A player's
    infoset key is its level plus its full token history, so players never
    forget.  Terminal utilities are uniform on [-1, 1].
    """
    if depth < 1 or branching < 2:
        raise ValueError("random_game needs depth >= 1 and branching >= 2")
    rng = np.random.default_rng(seed)

    # level plan: ("chance", visible_to) or ("player", mover, signal)
    plan: list[tuple] = []
    for level in range(depth):
        if rng.random() < 0.3:
            visible = {p: bool(rng.random() < 0.5) for p in (1, 2)}
            probs = rng.uniform(0.1, 1.0, size=branching)
            plan.append(("chance", visible, tuple((probs / probs.sum()).tolist())))
        mover = 1 + level % 2
        groups = int(rng.integers(1, branching + 1))
        signal = tuple(int(s) for s in rng.integers(0, groups, size=branching))
        plan.append(("player", mover, signal))

    total = sum(branching**j for j in range(len(plan) + 1)) + 2
    if total > node_budget:
        raise ValueError(f"random game would have {total} nodes (budget {node_budget})")

    def build(level: int, obs: dict[int, tuple[str, ...]]) -> Node:
        if level == len(plan):
            return Terminal(float(rng.uniform(-1.0, 1.0)))
        step = plan[level]
        if step[0] == "chance":
            _, visible, probs = step
            kids = []
            for a in range(branching):
                nxt = {p: obs[p] + ((f"c{a}" if visible[p] else "c?"),) for p in (1, 2)}
                kids.append(build(level + 1, nxt))
            return Chance(probs, tuple(kids))
        _, mover, signal = step
        other = 3 - mover
        name = f"L{level}:P{mover}:" + ".".join(obs[mover])
        kids = []
        for a in range(branching):
            nxt = {mover: obs[mover] + (f"a{a}",), other: obs[other] + (f"s{signal[a]}",)}
            kids.append(build(level + 1, nxt))
        return Decision(mover, name, tuple(f"a{a}" for a in range(branching)), tuple(kids))

    return Game(build(0, {1: (), 2: ()}))


def pure_strategy_count(game: Game, player: int) -> int:
    count = 1
    for I in game.infosets_of(player):
        count *= len(I.actions)
    return count


def seeded_random_game(seed: int, max_pure: int = 1 << 12) -> Game:
    """Small random game whose shape also varies with the seed.

    The shape is shrunk until each player has at most ``max_pure`` pure
    strategies, so exhaustive enumeration stays cheap.
    """
    depth = 2 + seed % 3
    branching = 2 + (seed // 3) % 2
    while True:
        game = random_game(seed, depth, branching)
        if max(pure_strategy_count(game, p) for p in (1, 2)) <= max_pure:
            return game
        if branching > 2:
            branching -= 1
        elif depth > 1:
            depth -= 1
        else:
            return game
