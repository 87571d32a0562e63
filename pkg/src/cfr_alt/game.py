"""Two-player zero-sum extensive-form games with perfect recall.

A game is described by an immutable tree of :class:`Terminal`, :class:`Chance`
and :class:`Decision` nodes (the *body*).  :class:`Game` wraps the body in one
synthetic single-action information set per player, so that the expected
utility of a profile is literally the counterfactual value of the root action:

    <root:1> --start--> <root:2> --start--> body

and then compiles the tree into flat numpy arrays (nodes in breadth-first
order, one *slot* per information-set action) used by the evaluator and
solver.  Only Player 1 utilities are stored; Player 2 receives ``-u1``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

PLAYERS = (1, 2)
ROOT_INFOSET = {1: "<root:1>", 2: "<root:2>"}
ROOT_ACTION = "start"

CHANCE = 0
TERMINAL = -1

PROB_TOL = 1e-12


@dataclass(frozen=True)
class Terminal:
    u1: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "u1", float(self.u1))


@dataclass(frozen=True)
class Chance:
    probs: tuple[float, ...]
    children: tuple["Node", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Decision:
    player: int
    infoset: str
    actions: tuple[str, ...]
    children: tuple["Node", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(str(a) for a in self.actions))
        object.__setattr__(self, "children", tuple(self.children))


Node = Union[Terminal, Chance, Decision]


@dataclass(frozen=True)
class InfoSet:
    """One information set of the compiled game.

    ``slots`` is the range of global slot indices (one per action), ``local``
    the same range within the owning player's strategy vector.
    """

    name: str
    player: int
    actions: tuple[str, ...]
    nodes: tuple[int, ...]
    index: int
    slots: range
    local: range

    @property
    def is_root(self) -> bool:
        return self.name == ROOT_INFOSET.get(self.player)


def _children(node: Node) -> tuple[Node, ...]:
    return () if isinstance(node, Terminal) else node.children


class Game:
    """Compiled, immutable view of a game body.

    Node arrays (index = breadth-first position, root is 0):

    - ``parent``, ``parent_action``: edge into the node (-1 at the root)
    - ``actor``: acting player, ``CHANCE`` or ``TERMINAL``
    - ``parent_actor``: actor of the parent (``TERMINAL`` at the root)
    - ``infoset_of``: information set index of decision nodes, else -1
    - ``child_slot``: global slot of the decision edge into the node, else -1
    - ``chance_prob``: probability of the chance edge into the node, else 1
    - ``u1``: Player 1 utility at terminals, 0 elsewhere
    """

    def __init__(self, body: Node):
        self.body = body
        self.root: Node = Decision(
            1,
            ROOT_INFOSET[1],
            (ROOT_ACTION,),
            (Decision(2, ROOT_INFOSET[2], (ROOT_ACTION,), (body,)),),
        )
        self._compile()

    # -- compilation -----------------------------------------------------

    def _compile(self) -> None:
        nodes: list[Node] = []
        parent: list[int] = []
        parent_action: list[int] = []
        depth: list[int] = []
        queue: deque[tuple[Node, int, int, int]] = deque([(self.root, -1, -1, 0)])
        while queue:
            node, par, act, d = queue.popleft()
            idx = len(nodes)
            nodes.append(node)
            parent.append(par)
            parent_action.append(act)
            depth.append(d)
            for a, child in enumerate(_children(node)):
                queue.append((child, idx, a, d + 1))

        n = len(nodes)
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.num_nodes = n
        self.parent = np.asarray(parent, dtype=np.intp)
        self.parent_action = np.asarray(parent_action, dtype=np.intp)
        self.depth = np.asarray(depth, dtype=np.intp)
        self.children: tuple[tuple[int, ...], ...]
        kids: list[list[int]] = [[] for _ in range(n)]
        for i in range(1, n):
            kids[parent[i]].append(i)
        self.children = tuple(tuple(k) for k in kids)

        bounds = np.flatnonzero(np.diff(self.depth)) + 1
        starts = [0, *bounds.tolist()]
        stops = [*bounds.tolist(), n]
        self.levels: tuple[tuple[int, int], ...] = tuple(zip(starts, stops))

        actor = np.full(n, TERMINAL, dtype=np.int64)
        u1 = np.zeros(n)
        for i, node in enumerate(nodes):
            if isinstance(node, Decision):
                actor[i] = node.player
            elif isinstance(node, Chance):
                actor[i] = CHANCE
            else:
                u1[i] = node.u1
        self.actor = actor
        self.u1 = u1
        self.parent_actor = np.where(self.parent >= 0, actor[np.maximum(self.parent, 0)], TERMINAL)
        self.terminals = np.flatnonzero(actor == TERMINAL)

        # group decision nodes into information sets, Player 1 first
        members: dict[str, list[int]] = {}
        for i, node in enumerate(nodes):
            if isinstance(node, Decision):
                members.setdefault(node.infoset, []).append(i)
        order = sorted(members, key=lambda name: (_owner(nodes, members[name]), members[name][0]))
        infosets: list[InfoSet] = []
        offset = 0
        local = {1: 0, 2: 0}
        for name in order:
            first = nodes[members[name][0]]
            assert isinstance(first, Decision)
            player = first.player
            k = len(first.actions)
            if player in PLAYERS:
                slots = range(offset, offset + k)
                loc = range(local[player], local[player] + k)
                offset += k
                local[player] += k
            else:
                slots = loc = range(0)
            infosets.append(InfoSet(name, player, first.actions, tuple(members[name]), len(infosets), slots, loc))
        self.infosets: tuple[InfoSet, ...] = tuple(infosets)
        self._by_name = {I.name: I for I in infosets}
        self.num_slots = offset
        self.slot_offset = {1: 0, 2: local[1]}
        self.player_slots = {1: local[1], 2: local[2]}

        infoset_of = np.full(n, -1, dtype=np.intp)
        for I in infosets:
            infoset_of[list(I.nodes)] = I.index
        self.infoset_of = infoset_of

        child_slot = np.full(n, -1, dtype=np.intp)
        chance_prob = np.ones(n)
        for i in range(1, n):
            par_node = nodes[parent[i]]
            a = parent_action[i]
            if isinstance(par_node, Chance):
                if a < len(par_node.probs):
                    chance_prob[i] = par_node.probs[a]
            else:
                I = infosets[infoset_of[parent[i]]]
                if a < len(I.slots):
                    child_slot[i] = I.slots[a]
        self.child_slot = child_slot
        self.chance_prob = chance_prob

        # per-player edge lists and segment ids (local infoset index per local slot)
        self.edge_nodes: dict[int, np.ndarray] = {}
        self.decision_nodes: dict[int, np.ndarray] = {}
        self.segments: dict[int, np.ndarray] = {}
        self.segment_sizes: dict[int, np.ndarray] = {}
        self._player_infosets: dict[int, tuple[InfoSet, ...]] = {}
        for p in PLAYERS:
            mine = tuple(I for I in infosets if I.player == p and len(I.slots))
            self._player_infosets[p] = mine
            self.edge_nodes[p] = np.flatnonzero((child_slot >= 0) & (self.parent_actor == p))
            self.decision_nodes[p] = np.flatnonzero(actor == p)
            seg = np.empty(local[p], dtype=np.intp)
            sizes = np.empty(len(mine), dtype=np.intp)
            for j, I in enumerate(mine):
                seg[I.local.start : I.local.stop] = j
                sizes[j] = len(I.local)
            self.segments[p] = seg
            self.segment_sizes[p] = sizes
        # local infoset index (within player) of each decision node
        self.local_infoset = np.full(n, -1, dtype=np.intp)
        for p in PLAYERS:
            for j, I in enumerate(self._player_infosets[p]):
                self.local_infoset[list(I.nodes)] = j

    # -- queries -----------------------------------------------------------

    def infoset(self, name: str) -> InfoSet:
        return self._by_name[name]

    def infosets_of(self, player: int) -> tuple[InfoSet, ...]:
        return self._player_infosets[player]

    @property
    def decision_infoset_count(self) -> int:
        """Information sets of both players, excluding the synthetic roots."""
        return sum(1 for I in self.infosets if I.player in PLAYERS and not I.is_root)

    @property
    def max_actions(self) -> int:
        return max(len(I.actions) for I in self.infosets)

    def iter_nodes(self) -> Iterator[tuple[int, Node]]:
        return enumerate(self.nodes)

    def history(self, node: int) -> tuple[int, ...]:
        """Action indices from the root to ``node``."""
        path = []
        while self.parent[node] >= 0:
            path.append(int(self.parent_action[node]))
            node = int(self.parent[node])
        return tuple(reversed(path))

    def with_infosets(self, mapping: Mapping[str, str]) -> "Game":
        """Copy of the game with information sets renamed (merging is allowed)."""
        return Game(relabel(self.body, mapping))

    def uniform(self, player: int) -> "BehaviorStrategy":
        probs = 1.0 / self.segment_sizes[player][self.segments[player]]
        return BehaviorStrategy(self, player, probs)

    def uniform_profile(self) -> "Profile":
        return Profile(self.uniform(1), self.uniform(2))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Game) and self.body == other.body

    def __hash__(self) -> int:
        return hash(self.body)

    def __repr__(self) -> str:
        return (
            f"Game(nodes={self.num_nodes}, terminals={len(self.terminals)}, "
            f"infosets={self.decision_infoset_count})"
        )


def _owner(nodes: Sequence[Node], members: list[int]) -> int:
    node = nodes[members[0]]
    assert isinstance(node, Decision)
    return node.player if node.player in PLAYERS else 3


def relabel(node: Node, mapping: Mapping[str, str]) -> Node:
    if isinstance(node, Terminal):
        return node
    kids = tuple(relabel(c, mapping) for c in node.children)
    if isinstance(node, Chance):
        return Chance(node.probs, kids)
    return Decision(node.player, mapping.get(node.infoset, node.infoset), node.actions, kids)


# -- strategies ---------------------------------------------------------------

Policy = np.ndarray


def is_policy(probs: np.ndarray, n: int | None = None, tol: float = PROB_TOL) -> bool:
    probs = np.asarray(probs, dtype=float)
    if n is not None and probs.shape != (n,):
        return False
    return bool(probs.size and np.all(probs >= 0) and abs(probs.sum() - 1.0) <= tol)


@dataclass(frozen=True, eq=False)
class BehaviorStrategy:
    """A policy for every information set of one player.

    ``probs`` is indexed by the player's local slots; ``strategy[name]``
    returns the policy at one information set.
    """

    game: Game
    player: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (self.game.player_slots[self.player],):
            raise ValueError(
                f"player {self.player} strategy needs {self.game.player_slots[self.player]} "
                f"entries, got shape {probs.shape}"
            )
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, name: str) -> Policy:
        I = self.game.infoset(name)
        if I.player != self.player:
            raise KeyError(f"{name!r} belongs to player {I.player}")
        return self.probs[I.local.start : I.local.stop]

    @classmethod
    def from_dict(cls, game: Game, player: int, policies: Mapping[str, Sequence[float]]) -> "BehaviorStrategy":
        """Build from ``{infoset: probs}``; missing infosets default to uniform."""
        probs = game.uniform(player).probs.copy()
        for name, pol in policies.items():
            I = game.infoset(name)
            if I.player != player:
                raise KeyError(f"{name!r} belongs to player {I.player}")
            probs[I.local.start : I.local.stop] = pol
        return cls(game, player, probs)

    def to_dict(self) -> dict[str, np.ndarray]:
        return {I.name: self[I.name].copy() for I in self.game.infosets_of(self.player)}

    def violations(self, tol: float = PROB_TOL) -> list[str]:
        out = []
        for I in self.game.infosets_of(self.player):
            if not is_policy(self[I.name], len(I.actions), tol):
                out.append(f"infoset {I.name}: not a probability distribution")
        return out


@dataclass(frozen=True, eq=False)
class Profile:
    strategy_1: BehaviorStrategy
    strategy_2: BehaviorStrategy

    def __post_init__(self) -> None:
        if self.strategy_1.player != 1 or self.strategy_2.player != 2:
            raise ValueError("profile needs a Player 1 and a Player 2 strategy")
        if self.strategy_1.game is not self.strategy_2.game and self.strategy_1.game != self.strategy_2.game:
            raise ValueError("strategies belong to different games")

    @property
    def game(self) -> Game:
        return self.strategy_1.game

    def strategy(self, player: int) -> BehaviorStrategy:
        return self.strategy_1 if player == 1 else self.strategy_2

    def replace(self, strategy: BehaviorStrategy) -> "Profile":
        if strategy.player == 1:
            return Profile(strategy, self.strategy_2)
        return Profile(self.strategy_1, strategy)

    @property
    def flat(self) -> np.ndarray:
        """Probabilities over all global slots."""
        return np.concatenate([self.strategy_1.probs, self.strategy_2.probs])


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.problems)

    def __len__(self) -> int:
        return len(self.problems)

    def __iter__(self) -> Iterator[str]:
        return iter(self.problems)

    def __contains__(self, text: object) -> bool:
        return any(str(text) in p for p in self.problems)

    @property
    def ok(self) -> bool:
        return not self.problems


class GameValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid game: " + "; ".join(report.problems))


def validate(game: Game) -> ValidationReport:
    """List every violated game invariant; an empty report means valid."""
    problems: list[str] = []
    nodes = game.nodes

    def where(i: int) -> str:
        return "/" + "/".join(map(str, game.history(i)))

    for name in ROOT_INFOSET.values():
        if name not in game._by_name or len(game.infoset(name).nodes) != 1:
            problems.append(f"synthetic root infoset {name} missing or reused")

    for i, node in enumerate(nodes):
        if isinstance(node, Terminal):
            if not math.isfinite(node.u1):
                problems.append(f"terminal {where(i)}: utility is not finite")
        elif isinstance(node, Chance):
            if not node.children:
                problems.append(f"chance node {where(i)}: no outcomes")
            if len(node.probs) != len(node.children):
                problems.append(
                    f"chance node {where(i)}: {len(node.probs)} probabilities for {len(node.children)} children"
                )
            if any(not math.isfinite(p) or p < 0 for p in node.probs):
                problems.append(f"chance node {where(i)}: negative or non-finite probability")
            total = math.fsum(node.probs)
            if abs(total - 1.0) > PROB_TOL:
                problems.append(f"chance node {where(i)}: chance sum ≠ 1 (sum={total!r})")
        else:
            if node.player not in PLAYERS:
                problems.append(f"decision node {where(i)}: player {node.player} not in {{1, 2}}")
            if not node.actions:
                problems.append(f"decision node {where(i)}: no actions")
            if len(node.children) != len(node.actions):
                problems.append(
                    f"decision node {where(i)}: {len(node.children)} children for {len(node.actions)} actions"
                )
            if len(set(node.actions)) != len(node.actions):
                problems.append(f"decision node {where(i)}: duplicate action names")
            if i > 1 and node.infoset in ROOT_INFOSET.values():
                problems.append(f"decision node {where(i)}: reserved infoset name {node.infoset}")

    # own (infoset, action) sequence of every player at every node
    own: dict[int, list[tuple]] = {p: [()] * game.num_nodes for p in PLAYERS}
    for i in range(1, game.num_nodes):
        par = int(game.parent[i])
        par_node = nodes[par]
        for p in PLAYERS:
            seq = own[p][par]
            if isinstance(par_node, Decision) and par_node.player == p:
                seq = seq + ((par_node.infoset, int(game.parent_action[i])),)
            own[p][i] = seq

    for I in game.infosets:
        members = [nodes[i] for i in I.nodes]
        players = {m.player for m in members}  # type: ignore[union-attr]
        if len(players) > 1:
            problems.append(f"infoset {I.name}: nodes of different players {sorted(players)}")
        if any(m.actions != I.actions for m in members):  # type: ignore[union-attr]
            problems.append(f"infoset {I.name}: inconsistent action lists")
        if I.player in PLAYERS:
            seqs = {own[I.player][i] for i in I.nodes}
            if len(seqs) > 1:
                problems.append(f"infoset {I.name}: perfect recall violated")
    return ValidationReport(problems)


def utility_bound(game: Game) -> float:
    """``max_{y,z} u1(y) - u2(z)``, i.e. twice the largest Player 1 payoff."""
    top = float(game.u1[game.terminals].max())
    return top + top
