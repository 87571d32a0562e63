"""Acceptance gate: one test per criterion, each run at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary (and echoed immediately with ``-s``).
"""

import time

import numpy as np
import pytest

from cfr_alt.builders import counterexample_game, kuhn_poker, seeded_random_game
from cfr_alt.cli import main
from cfr_alt.evaluator import (
    best_response,
    brute_force_cfv,
    counterfactual_values,
    expected_utility,
    exploitability,
)
from cfr_alt.oracles import enumerated_best_response_value, equilibrium_value
from cfr_alt.regret import RegretKind
from cfr_alt.solver import (
    Averaging,
    SolverConfig,
    UpdateMode,
    counterexample_sequence,
    replay_forced_sequence,
    run,
)
from cfr_alt.verifier import (
    alternating_decomposition,
    certify_run,
    check_cfr_improvement,
    check_rm_lemmas,
    negative_control_updates,
)

from conftest import ACCEPTANCE
from strategies import random_profile


def record(label, passed, detail):
    ACCEPTANCE.append((label, bool(passed), detail))
    print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
    assert passed, detail


def test_1_counterexample_replay():
    game = counterexample_game()
    start = time.perf_counter()
    worst = 0.0
    for T in (1, 5, 50):
        rec = replay_forced_sequence(game, counterexample_sequence(game, 2 * T), stride=2 * T)
        row = rec.rows[-1]
        exact = (
            np.array_equal(rec.average.strategy_1["X"], [0.5, 0.5])
            and np.array_equal(rec.average.strategy_2["Y"], [0.5, 0.5])
        )
        if not exact:
            worst = np.inf
        expl = exploitability(game, rec.average)
        worst = max(worst, abs(row.avg_regret_1), abs(row.avg_regret_2), abs(expl - 0.5))
    elapsed = time.perf_counter() - start
    record(
        "1 counterexample replay (T=1,5,50)",
        worst <= 1e-12 and elapsed < 1.0,
        f"worst deviation {worst:.1e} (tol 1e-12), averages exactly (0.5, 0.5), {elapsed:.3f}s (< 1s)",
    )


def _alternating_runs():
    kuhn = kuhn_poker()
    runs = [
        ("kuhn cfr+", kuhn, SolverConfig.cfr_plus(iterations=100, stride=100, record_trace=True)),
        ("kuhn cfr", kuhn, SolverConfig.cfr(update=UpdateMode.ALTERNATING, iterations=100, stride=100,
                                            record_trace=True)),
    ]
    for seed in range(18):
        kind = RegretKind.RM_PLUS if seed % 2 else RegretKind.RM
        avg = Averaging.LINEAR if seed % 2 else Averaging.UNIFORM
        config = SolverConfig(kind, UpdateMode.ALTERNATING, avg, iterations=100, stride=100, record_trace=True)
        runs.append((f"random {seed}", seeded_random_game(seed), config))
    return runs


def test_2_alternating_regret_identity():
    """The identity is checked as ``r1 + r2 - improvement - expl = 0``.

    With the improvement term defined as ``u1(sigma^{i+1}_1, sigma^i_2) -
    u1(sigma^i)`` this is the sign that makes the counterexample read
    ``0 + 0 = 0.5 + (-0.5)``; see ``test_2_literal_sign_variant`` for the
    other sign.
    """
    game = counterexample_game()
    d = alternating_decomposition(game, counterexample_sequence(game, 10))
    worst = abs(d.residual)
    count = 1
    for _, g, config in _alternating_runs():
        rec = run(g, config)
        d = alternating_decomposition(g, rec.trace.profiles, config.averaging)
        worst = max(worst, abs(d.residual))
        count += 1
    record(
        "2 alternating regret identity",
        worst <= 1e-9 and count == 21,
        f"max |r1 + r2 - improvement - expl| = {worst:.1e} over replay + {count - 1} runs (tol 1e-9)",
    )


@pytest.mark.xfail(strict=True, reason="the '+ improvement' sign contradicts the replay: residual = 2 * improvement")
def test_2_literal_sign_variant():
    game = counterexample_game()
    d = alternating_decomposition(game, counterexample_sequence(game, 10))
    literal = d.regret_1 + d.regret_2 + d.improvement - d.expl
    ACCEPTANCE.append(
        ("2' identity with '+ improvement' sign (expected to fail)", False,
         f"residual {literal:+.3f} on the counterexample replay, i.e. 2 x mean improvement")
    )
    assert abs(literal) <= 1e-9


def test_3_cfr_plus_bound_on_kuhn():
    game = kuhn_poker()
    start = time.perf_counter()
    rec = run(game, SolverConfig.cfr_plus(iterations=10_000, stride=10))
    elapsed = time.perf_counter() - start
    expl, bound = rec.column("expl"), rec.column("bound")
    under = bool(np.all(expl <= bound))
    ratio = expl[-1] / bound[-1]
    record(
        "3 bound on Kuhn, CFR+ alternating linear, t<=1e4",
        under and ratio < 0.1 and elapsed < 60,
        f"{len(expl)} snapshots all under bound; final expl {expl[-1]:.3e} = {ratio:.2e} x bound "
        f"{bound[-1]:.4f} (< 0.1); {elapsed:.1f}s (< 60s)",
    )


def test_4_single_player_improvement():
    worst = 0.0
    updates = 0
    kuhn = kuhn_poker()
    for config in (SolverConfig.cfr_plus(iterations=300, stride=300, record_trace=True),
                   SolverConfig.cfr(iterations=300, stride=300, record_trace=True)):
        rec = run(kuhn, config)
        reports = check_cfr_improvement(kuhn, rec.trace.updates)
        worst = max([worst] + [r.worst_violation for r in reports])
        updates += reports[0].instances
    for seed in range(20):
        game = seeded_random_game(seed)
        for config in (SolverConfig.cfr_plus(iterations=50, stride=50, record_trace=True),
                       SolverConfig.cfr(iterations=50, stride=50, record_trace=True)):
            rec = run(game, config)
            reports = check_cfr_improvement(game, rec.trace.updates)
            worst = max([worst] + [r.worst_violation for r in reports])
            updates += reports[0].instances
    control = max(r.worst_violation for r in check_cfr_improvement(kuhn, negative_control_updates(kuhn)))
    record(
        "4 per-infoset and root improvement",
        worst <= 1e-9 and control > 1e-3,
        f"worst violation {worst:.1e} over {updates} updates (tol 1e-9); negative control {control:.3f} (> 1e-3)",
    )


def test_5_regret_matching_properties():
    reports = check_rm_lemmas(range(100), steps=200)
    worst = max(r.worst_violation for r in reports)
    record(
        "5 regret-matching property suite",
        all(r.passed for r in reports) and worst <= 1e-12,
        "; ".join(f"{r.check} worst {r.worst_violation:.1e}" for r in reports) + f" ({reports[0].instances} steps)",
    )


def test_6_oracle_equivalence():
    games = [("obs1", counterexample_game()), ("kuhn", kuhn_poker())]
    games += [(f"random {s}", seeded_random_game(s)) for s in range(100)]
    cfv_gap = br_gap = 0.0
    for name, game in games:
        assert len(game.terminals) <= 1000, name
        for k, profile in enumerate([game.uniform_profile(), random_profile(game, 17), random_profile(game, 99)]):
            for p in (1, 2):
                fast = counterfactual_values(game, profile, p).values
                slow = brute_force_cfv(game, profile, p).values
                cfv_gap = max(cfv_gap, float(np.max(np.abs(fast - slow))))
                opp = profile.strategy(3 - p)
                _, value = best_response(game, opp, p)
                br_gap = max(br_gap, abs(value - enumerated_best_response_value(game, opp, p)))
    record(
        "6 oracle equivalence (102 games)",
        cfv_gap <= 1e-10 and br_gap <= 1e-10,
        f"max CFV gap {cfv_gap:.1e}, max best-response gap {br_gap:.1e} (tol 1e-10)",
    )


def test_7_kuhn_game_value():
    game = kuhn_poker()
    config = SolverConfig.cfr_plus(iterations=10_000, stride=100)
    certified = all(r.passed for r in certify_run(game, config))
    avg = run(game, config).average
    u1 = expected_utility(game, avg, 1)
    oracle = equilibrium_value(game)
    analytic = -1.0 / 18.0  # cross-check only
    record(
        "7 Kuhn game value",
        certified and abs(u1 - oracle) <= 0.01 and abs(oracle - analytic) <= 1e-9,
        f"certified run u1 = {u1:.6f}, normal-form oracle {oracle:.6f} (|diff| {abs(u1 - oracle):.1e} <= 0.01); "
        f"oracle vs -1/18: {abs(oracle - analytic):.1e}",
    )


def test_8_cli_determinism(tmp_path):
    paths = [tmp_path / f"run{i}.csv" for i in range(3)]
    codes = [main(["solve", "--game", "kuhn", "--algo", "cfr+", "--iters", "500", "--out", str(p)]) for p in paths]
    blobs = [p.read_bytes() for p in paths]
    record(
        "8 CSV determinism",
        codes == [0, 0, 0] and len(set(blobs)) == 1,
        f"3 solve runs, {len(blobs[0])} bytes each, identical={len(set(blobs)) == 1}",
    )
