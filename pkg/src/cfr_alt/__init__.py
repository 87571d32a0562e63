"""CFR and CFR+ for two-player zero-sum extensive-form games, with
simultaneous or alternating updates and a numerical verification harness."""

from .builders import counterexample_game, kuhn_poker, random_game, seeded_random_game
from .evaluator import (
    average_regret,
    average_strategy,
    best_response,
    brute_force_cfv,
    counterfactual_values,
    expected_utility,
    exploitability,
    reach,
)
from .game import BehaviorStrategy, Chance, Decision, Game, Profile, Terminal, validate
from .gamefile import load_game, save_game
from .regret import RegretKind, RegretState, update
from .solver import Averaging, SolverConfig, UpdateMode, iterate, replay_forced_sequence, run
from .verifier import TheoremReport, certify_run

__all__ = [
    "Averaging",
    "BehaviorStrategy",
    "Chance",
    "Decision",
    "Game",
    "Profile",
    "RegretKind",
    "RegretState",
    "SolverConfig",
    "Terminal",
    "TheoremReport",
    "UpdateMode",
    "average_regret",
    "average_strategy",
    "best_response",
    "brute_force_cfv",
    "certify_run",
    "counterexample_game",
    "counterfactual_values",
    "expected_utility",
    "exploitability",
    "iterate",
    "kuhn_poker",
    "load_game",
    "random_game",
    "reach",
    "replay_forced_sequence",
    "run",
    "save_game",
    "seeded_random_game",
    "update",
    "validate",
]
