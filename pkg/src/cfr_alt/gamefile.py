"""JSON game files.

Format::

    {"players": 2, "root": <node>}
    <node> := {"chance":   {"probs": [...], "children": [<node>, ...]}}
            | {"decision": {"player": 1|2, "infoset": "id",
                            "actions": ["a", ...], "children": [<node>, ...]}}
            | {"terminal": {"u1": number}}          # optional "u2": -u1

``root`` is the game body; the synthetic single-action root infosets are
added on load and stripped on save.  Chance probabilities must sum to one
within 1e-9 and are renormalised on load; a terminal that also gives ``u2``
must satisfy ``u1 + u2 = 0``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .game import (
    Chance,
    Decision,
    Game,
    GameValidationError,
    Node,
    Terminal,
    ValidationReport,
    validate,
)

LOAD_PROB_TOL = 1e-9
ZERO_SUM_TOL = 1e-12


class GameParseError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GameParseError(where, f"expected a number, got {value!r}")
    return float(value)


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise GameParseError(where, f"expected a list, got {type(value).__name__}")
    return value


def _node(obj: Any, where: str, zero_sum: list[str]) -> Node:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise GameParseError(where, "node must be an object with exactly one of chance/decision/terminal")
    (kind, body), = obj.items()
    if kind not in ("chance", "decision", "terminal"):
        raise GameParseError(where, f"unknown node kind {kind!r}")
    here = f"{where}.{kind}"
    if not isinstance(body, dict):
        raise GameParseError(here, "expected an object")
    if kind == "terminal":
        if "u1" not in body:
            raise GameParseError(here, "missing field 'u1'")
        u1 = _number(body["u1"], f"{here}.u1")
        if "u2" in body:
            u2 = _number(body["u2"], f"{here}.u2")
            if abs(u1 + u2) > ZERO_SUM_TOL:
                zero_sum.append(f"terminal {where}: utilities not zero-sum (u1={u1!r}, u2={u2!r})")
        return Terminal(u1)
    children = [
        _node(c, f"{here}.children[{i}]", zero_sum)
        for i, c in enumerate(_list(body.get("children"), f"{here}.children"))
    ]
    if kind == "chance":
        probs = [_number(p, f"{here}.probs[{i}]") for i, p in enumerate(_list(body.get("probs"), f"{here}.probs"))]
        total = math.fsum(probs)
        if abs(total - 1.0) > LOAD_PROB_TOL:
            raise GameParseError(f"{here}.probs", f"probabilities sum to {total!r}, not 1")
        if abs(total - 1.0) > 1e-12:
            probs = [p / total for p in probs]
        return Chance(tuple(probs), tuple(children))
    player = body.get("player")
    if isinstance(player, bool) or not isinstance(player, int):
        raise GameParseError(f"{here}.player", f"expected 1 or 2, got {player!r}")
    infoset = body.get("infoset")
    if not isinstance(infoset, str):
        raise GameParseError(f"{here}.infoset", "expected a string id")
    actions = _list(body.get("actions"), f"{here}.actions")
    if not all(isinstance(a, str) for a in actions):
        raise GameParseError(f"{here}.actions", "action names must be strings")
    return Decision(player, infoset, tuple(actions), tuple(children))


def load_game(text: str) -> Game:
    """Parse and validate a game; raises GameParseError or GameValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise GameParseError(f"line {err.lineno} column {err.colno}", err.msg) from None
    if not isinstance(doc, dict):
        raise GameParseError("top level", "expected an object")
    if doc.get("players") != 2:
        raise GameParseError("players", f"expected 2, got {doc.get('players')!r}")
    if "root" not in doc:
        raise GameParseError("root", "missing field")
    zero_sum: list[str] = []
    game = Game(_node(doc["root"], "root", zero_sum))
    report = validate(game)
    if zero_sum or report:
        raise GameValidationError(ValidationReport(zero_sum + report.problems))
    return game


def _dump(node: Node) -> dict:
    if isinstance(node, Terminal):
        return {"terminal": {"u1": node.u1}}
    if isinstance(node, Chance):
        return {"chance": {"probs": list(node.probs), "children": [_dump(c) for c in node.children]}}
    return {
        "decision": {
            "player": node.player,
            "infoset": node.infoset,
            "actions": list(node.actions),
            "children": [_dump(c) for c in node.children],
        }
    }


def save_game(game: Game) -> str:
    return json.dumps({"players": 2, "root": _dump(game.body)}, indent=1) + "\n"


def read_game(path: str | Path) -> Game:
    return load_game(Path(path).read_text())


def write_game(game: Game, path: str | Path) -> None:
    Path(path).write_text(save_game(game))
