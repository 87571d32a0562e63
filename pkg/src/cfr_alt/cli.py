"""Command-line front end.

    cfr-alt solve  --game kuhn --algo cfr+ --iters 1000 --out kuhn.csv
    cfr-alt verify --scope all --seeds 0..49
    cfr-alt replay-obs1 --T 5

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .builders import counterexample_game, kuhn_poker, random_game, seeded_random_game
from .evaluator import exploitability
from .game import Game, GameValidationError
from .gamefile import GameParseError, read_game
from .regret import RegretKind
from .solver import (
    Averaging,
    SolverConfig,
    UpdateMode,
    counterexample_sequence,
    pure_profile,
    replay_forced_sequence,
    run,
)
from .verifier import (
    ARITHMETIC_TOL,
    TheoremReport,
    certify_run,
    check_cfr_improvement,
    check_folk_decomposition,
    check_rm_lemmas,
    negative_control_updates,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SCOPES = ("all", "rm", "cfr", "folk", "bound")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunManifest:
    game: str
    config: SolverConfig
    out: str | None = None


def resolve_game(source: str) -> Game:
    """Builtin name (``obs1``, ``kuhn``, ``random:S:D:B``) or a JSON game file.

    Raises UsageError for a malformed builtin name and OSError / parse errors
    for file problems.
    """
    if source == "obs1":
        return counterexample_game()
    if source == "kuhn":
        return kuhn_poker()
    if source.startswith("random:"):
        parts = source.split(":")[1:]
        try:
            seed, depth, branching = (int(x) for x in parts)
        except ValueError:
            raise UsageError(f"expected random:<seed>:<depth>:<branching>, got {source!r}") from None
        try:
            return random_game(seed, depth, branching)
        except ValueError as err:
            raise UsageError(str(err)) from None
    return read_game(source)


def parse_seeds(text: str) -> range:
    """``A..B`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must look like A..B, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or negative seed range {text!r}")
    return range(lo, hi + 1)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_manifest(args: argparse.Namespace) -> RunManifest:
    plus = args.algo == "cfr+"
    update = args.update or ("alternating" if plus else "simultaneous")
    avg = args.avg or ("linear" if plus else "uniform")
    config = SolverConfig(
        minimizer=RegretKind.RM_PLUS if plus else RegretKind.RM,
        update=UpdateMode(update),
        averaging=Averaging(avg),
        iterations=args.iters,
        stride=args.stride,
    )
    return RunManifest(args.game, config, args.out)


def cmd_solve(manifest: RunManifest) -> int:
    try:
        game = resolve_game(manifest.game)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GameParseError, GameValidationError) as err:
        print(f"error: cannot load game {manifest.game!r}: {err}", file=sys.stderr)
        return EXIT_IO
    text = run(game, manifest.config).to_csv()
    if manifest.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(manifest.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as err:
        print(f"error: cannot write {manifest.out!r}: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# -- verify ---------------------------------------------------------------------

Job = Callable[[], list[TheoremReport]]


def _rm_jobs(seeds: range) -> list[Job]:
    return [lambda: check_rm_lemmas(seeds)]


def _cfr_jobs(seeds: range, kuhn_iters: int) -> list[Job]:
    def kuhn() -> list[TheoremReport]:
        record = run(kuhn_poker(), SolverConfig.cfr_plus(iterations=kuhn_iters, stride=kuhn_iters, record_trace=True))
        return check_cfr_improvement(kuhn_poker(), record.trace.updates, "kuhn cfr+")

    def random_seed(seed: int) -> Job:
        def job() -> list[TheoremReport]:
            game = seeded_random_game(seed)
            record = run(game, SolverConfig.cfr(iterations=50, stride=50, record_trace=True))
            return check_cfr_improvement(game, record.trace.updates, f"random {seed} cfr")
        return job

    return [kuhn] + [random_seed(s) for s in seeds]


def _folk_jobs(seeds: range) -> list[Job]:
    def obs1() -> list[TheoremReport]:
        game = counterexample_game()
        forced = check_folk_decomposition(game, counterexample_sequence(game, 10), subject="obs1 replay")
        nash = [pure_profile(game, {"X": 1, "Y": 0})] * 11
        constant = check_folk_decomposition(game, nash, subject="obs1 constant")
        return [forced, constant]

    def kuhn() -> list[TheoremReport]:
        game = kuhn_poker()
        record = run(game, SolverConfig.cfr_plus(iterations=100, stride=100, record_trace=True))
        return [check_folk_decomposition(game, record.trace.profiles, Averaging.LINEAR, subject="kuhn cfr+")]

    def random_seed(seed: int) -> Job:
        def job() -> list[TheoremReport]:
            game = seeded_random_game(seed)
            config = SolverConfig.cfr(update=UpdateMode.ALTERNATING, iterations=100, stride=100, record_trace=True)
            record = run(game, config)
            return [check_folk_decomposition(game, record.trace.profiles, subject=f"random {seed} cfr-alt")]
        return job

    return [obs1, kuhn] + [random_seed(s) for s in seeds]


def _bound_jobs(seeds: range, kuhn_iters: int) -> list[Job]:
    def kuhn() -> list[TheoremReport]:
        return certify_run(kuhn_poker(), SolverConfig.cfr_plus(iterations=kuhn_iters, stride=10), subject="kuhn")

    def obs1() -> list[TheoremReport]:
        return certify_run(counterexample_game(), SolverConfig.cfr_plus(iterations=1000, stride=10), subject="obs1")

    def random_seed(seed: int) -> Job:
        def job() -> list[TheoremReport]:
            config = SolverConfig.cfr_plus(iterations=200, stride=10)
            return certify_run(seeded_random_game(seed), config, subject=f"random {seed}")
        return job

    return [kuhn, obs1] + [random_seed(s) for s in seeds]


def _self_test_job() -> list[TheoremReport]:
    game = kuhn_poker()
    return check_cfr_improvement(game, negative_control_updates(game), "negative control")


def verify_jobs(scope: str, seeds: range, kuhn_iters: int = 10_000) -> list[Job]:
    jobs: list[Job] = []
    if scope in ("all", "rm"):
        jobs += _rm_jobs(seeds)
    if scope in ("all", "cfr"):
        jobs += _cfr_jobs(seeds, min(kuhn_iters, 500))
    if scope in ("all", "folk"):
        jobs += _folk_jobs(seeds)
    if scope in ("all", "bound"):
        jobs += _bound_jobs(seeds, kuhn_iters)
    return jobs


def thread_cap() -> int:
    raw = os.environ.get("CFR_ALT_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, cap)


def cmd_verify(scope: str, seeds: range, self_test: bool = False, kuhn_iters: int = 10_000) -> int:
    jobs = verify_jobs(scope, seeds, kuhn_iters)
    if self_test:
        jobs.append(_self_test_job)
    with ThreadPoolExecutor(max_workers=min(thread_cap(), len(jobs))) as pool:
        results = list(pool.map(lambda job: job(), jobs))
    reports = [r for batch in results for r in batch]
    for report in reports:
        print(report.line())
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- replay ---------------------------------------------------------------------


def cmd_replay_obs1(T: int) -> int:
    if T < 1:
        print("error: T must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    game = counterexample_game()
    record = replay_forced_sequence(game, counterexample_sequence(game, 2 * T), stride=2 * T)
    row = record.rows[-1]
    x = float(record.average.strategy_1["X"][1])
    y = float(record.average.strategy_2["Y"][1])
    expl = exploitability(game, record.average)
    checks = {
        "avg_regret_1": (row.avg_regret_1, 0.0),
        "avg_regret_2": (row.avg_regret_2, 0.0),
        "avg_X(1)": (x, 0.5),
        "avg_Y(1)": (y, 0.5),
        "expl": (expl, 0.5),
    }
    print(f"t = {2 * T}")
    ok = True
    for name, (got, want) in checks.items():
        good = abs(got - want) <= ARITHMETIC_TOL
        ok &= good
        print(f"{name:<13} {got!r:<24} expected {want!r:<6} {'PASS' if good else 'FAIL'}")
    print(f"improvement   {row.improvement!r}")
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfr-alt", description="CFR / CFR+ solver and verification harness")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run a solver and write the convergence table as CSV")
    solve.add_argument("--game", required=True, help="obs1, kuhn, random:S:D:B, or a JSON game file")
    solve.add_argument("--algo", choices=("cfr", "cfr+"), default="cfr+")
    solve.add_argument("--update", choices=[m.value for m in UpdateMode], default=None)
    solve.add_argument("--avg", choices=[a.value for a in Averaging], default=None)
    solve.add_argument("--iters", type=_positive, default=1000)
    solve.add_argument("--stride", type=_positive, default=10)
    solve.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    verify = sub.add_parser("verify", help="check the convergence guarantees numerically")
    verify.add_argument("--scope", choices=SCOPES, default="all")
    verify.add_argument("--seeds", type=parse_seeds, default=parse_seeds("0..19"))
    verify.add_argument("--iters", type=_positive, default=10_000, help="Kuhn certification length")
    verify.add_argument("--self-test", action="store_true", help="add a non-regret-matching update that must fail")

    replay = sub.add_parser("replay-obs1", help="replay the alternating-update counterexample")
    replay.add_argument("--T", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command == "solve":
        return cmd_solve(build_manifest(args))
    if args.command == "verify":
        return cmd_verify(args.scope, args.seeds, args.self_test, args.iters)
    return cmd_replay_obs1(args.T)


if __name__ == "__main__":
    raise SystemExit(main())
