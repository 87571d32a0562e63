"""Regret-matching and regret-matching+ for a single decision point.

Both minimizers store one real value per action and play the positive part of
the stored vector, normalised, falling back to uniform when nothing is
positive.  RM accumulates raw regrets; RM+ clamps the stored values at zero
after every step.

The segment functions at the bottom apply the same rules to many information
sets at once, packed into one flat array with a segment id per action; the
solver uses them so it never has to loop over information sets in Python.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class RegretKind(enum.Enum):
    RM = "rm"
    RM_PLUS = "rm+"


@dataclass(frozen=True, eq=False)
class RegretState:
    stored: np.ndarray
    kind: RegretKind = RegretKind.RM

    def __post_init__(self) -> None:
        stored = np.array(self.stored, dtype=float)
        if stored.ndim != 1 or stored.size == 0:
            raise ValueError("stored values must be a non-empty vector")
        if self.kind is RegretKind.RM_PLUS and np.any(stored < 0):
            raise ValueError("RM+ stored values must be non-negative")
        stored.flags.writeable = False
        object.__setattr__(self, "stored", stored)

    @classmethod
    def zeros(cls, n: int, kind: RegretKind = RegretKind.RM) -> "RegretState":
        return cls(np.zeros(n), kind)

    @property
    def has_positive(self) -> bool:
        return bool(np.any(self.stored > 0))


def positive_part(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def normalized_positive(stored: np.ndarray) -> np.ndarray:
    """Policy for a stored vector: positive part normalised, else uniform."""
    stored = np.asarray(stored, dtype=float)
    pos = positive_part(stored)
    total = pos.sum()
    if np.any(stored > 0):
        return pos / total
    return np.full(stored.shape, 1.0 / stored.size)


def policy_from_state(state: RegretState) -> np.ndarray:
    return normalized_positive(state.stored)


def update(state: RegretState, values: np.ndarray) -> RegretState:
    """One step against ``values``; the policy played is the state's own."""
    values = np.asarray(values, dtype=float)
    if values.shape != state.stored.shape:
        raise ValueError(f"values have shape {values.shape}, expected {state.stored.shape}")
    sigma = policy_from_state(state)
    stored = state.stored + values - sigma @ values
    if state.kind is RegretKind.RM_PLUS:
        stored = positive_part(stored)
    return RegretState(stored, state.kind)


# -- many information sets at once -------------------------------------------


def segment_policies(stored: np.ndarray, segments: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """``normalized_positive`` applied to every segment of a flat array."""
    pos = positive_part(stored)
    totals = np.bincount(segments, weights=pos, minlength=len(sizes))
    has = np.bincount(segments, weights=(stored > 0), minlength=len(sizes)) > 0
    denom = np.where(has, totals, 1.0)[segments]
    return np.where(has[segments], pos / denom, 1.0 / sizes[segments])


def segment_update(
    stored: np.ndarray,
    values: np.ndarray,
    segments: np.ndarray,
    sizes: np.ndarray,
    kind: RegretKind,
) -> np.ndarray:
    """``update`` applied to every segment; returns the new stored array."""
    sigma = segment_policies(stored, segments, sizes)
    played = np.bincount(segments, weights=sigma * values, minlength=len(sizes))
    out = stored + values - played[segments]
    if kind is RegretKind.RM_PLUS:
        out = positive_part(out)
    return out
