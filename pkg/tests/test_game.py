import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfr_alt.builders import (
    NODE_BUDGET,
    counterexample_game,
    kuhn_poker,
    pure_strategy_count,
    random_game,
    seeded_random_game,
)
from cfr_alt.game import (
    ROOT_INFOSET,
    BehaviorStrategy,
    Chance,
    Decision,
    Game,
    GameValidationError,
    Profile,
    Terminal,
    utility_bound,
    validate,
)
from cfr_alt.gamefile import GameParseError, load_game, read_game, save_game, write_game


class TestValidate:
    def test_counterexample_is_valid(self, obs1):
        assert validate(obs1).ok

    def test_kuhn_is_valid(self, kuhn):
        assert validate(kuhn).ok

    def test_kuhn_shape(self, kuhn):
        body_terminals = len(kuhn.terminals)
        assert body_terminals == 30
        assert kuhn.decision_infoset_count == 12
        assert kuhn.max_actions == 2
        assert len(kuhn.infosets_of(1)) == 7  # six card/history sets plus the root
        assert len(kuhn.infosets_of(2)) == 7

    def test_kuhn_deals(self, kuhn):
        assert kuhn.body.probs == (1 / 6,) * 6
        assert set(kuhn.u1[kuhn.terminals]) == {-2.0, -1.0, 1.0, 2.0}

    def test_counterexample_shape(self, obs1):
        assert obs1.u1[obs1.terminals].tolist() == [0.0, 0.0, 0.0, 1.0]
        assert [len(obs1.infoset(n).actions) for n in ("X", "Y")] == [2, 2]
        assert len(obs1.infoset("Y").nodes) == 2

    def test_chance_sum_reported(self):
        game = Game(Chance((0.5, 0.6), (Terminal(1.0), Terminal(-1.0))))
        assert "chance sum ≠ 1" in validate(game)

    def test_merged_infosets_break_perfect_recall(self, kuhn):
        # J: is the opening move and J:pb comes after Player 1 already acted
        merged = kuhn.with_infosets({"J:pb": "J:"})
        assert "perfect recall violated" in validate(merged)

    def test_inconsistent_actions(self):
        body = Chance(
            (0.5, 0.5),
            (
                Decision(1, "I", ("a", "b"), (Terminal(0.0), Terminal(1.0))),
                Decision(1, "I", ("a", "c"), (Terminal(0.0), Terminal(1.0))),
            ),
        )
        assert "inconsistent action lists" in validate(Game(body))

    def test_structural_problems(self):
        report = validate(Game(Decision(3, "I", ("a", "a"), (Terminal(0.0),))))
        assert "not in {1, 2}" in report
        assert "duplicate action names" in report
        assert "1 children for 2 actions" in report

    def test_mixed_players_in_one_infoset(self):
        body = Chance(
            (0.5, 0.5),
            (
                Decision(1, "I", ("a",), (Terminal(0.0),)),
                Decision(2, "I", ("a",), (Terminal(0.0),)),
            ),
        )
        assert "different players" in validate(Game(body))

    def test_non_finite_utility(self):
        assert "not finite" in validate(Game(Decision(1, "I", ("a",), (Terminal(float("nan")),))))

    def test_reserved_name(self):
        assert "reserved infoset name" in validate(Game(Decision(1, ROOT_INFOSET[1], ("a",), (Terminal(0.0),))))


class TestCompiledLayout:
    def test_synthetic_roots(self, kuhn):
        assert kuhn.nodes[0].infoset == ROOT_INFOSET[1]
        assert kuhn.nodes[1].infoset == ROOT_INFOSET[2]
        assert kuhn.infoset(ROOT_INFOSET[1]).is_root

    def test_slots_partition(self, kuhn):
        seen = []
        for I in kuhn.infosets:
            seen.extend(I.slots)
        assert sorted(seen) == list(range(kuhn.num_slots))

    def test_parent_links(self, kuhn):
        for i in range(1, kuhn.num_nodes):
            parent = kuhn.nodes[kuhn.parent[i]]
            assert parent.children[kuhn.parent_action[i]] is kuhn.nodes[i]

    def test_history_round_trip(self, kuhn):
        for i in range(kuhn.num_nodes):
            node = kuhn.root
            for a in kuhn.history(i):
                node = node.children[a]
            assert node is kuhn.nodes[i]

    def test_utility_bound(self, kuhn, obs1):
        assert utility_bound(kuhn) == 4.0
        assert utility_bound(obs1) == 2.0


class TestStrategies:
    def test_uniform(self, kuhn):
        s = kuhn.uniform(1)
        assert not s.violations()
        np.testing.assert_array_equal(s["K:"], [0.5, 0.5])

    def test_wrong_shape(self, kuhn):
        with pytest.raises(ValueError):
            BehaviorStrategy(kuhn, 1, np.ones(3))

    def test_wrong_player_lookup(self, kuhn):
        with pytest.raises(KeyError):
            kuhn.uniform(1)["K:b"]

    def test_from_dict(self, kuhn):
        s = BehaviorStrategy.from_dict(kuhn, 2, {"K:b": [0.0, 1.0]})
        np.testing.assert_array_equal(s["K:b"], [0.0, 1.0])
        np.testing.assert_array_equal(s["J:b"], [0.5, 0.5])

    def test_violations(self, kuhn):
        s = BehaviorStrategy.from_dict(kuhn, 1, {"Q:": [0.7, 0.7]})
        assert s.violations() == ["infoset Q:: not a probability distribution"]

    def test_profile_player_order(self, kuhn):
        with pytest.raises(ValueError):
            Profile(kuhn.uniform(2), kuhn.uniform(1))


class TestRandomGames:
    @given(st.integers(0, 10_000))
    def test_deterministic(self, seed):
        assert random_game(seed, 3, 2) == random_game(seed, 3, 2)

    @given(st.integers(0, 10_000), st.integers(1, 4), st.integers(2, 3))
    def test_always_valid(self, seed, depth, branching):
        assert validate(random_game(seed, depth, branching)).ok

    def test_seed_seven_examples(self):
        assert validate(random_game(7, 2, 2)).ok
        shallow = random_game(7, 1, 2)
        assert all(len(I.actions) == 2 for I in shallow.infosets if not I.is_root)
        a, b = random_game(7, 2, 2), random_game(7, 2, 2)
        np.testing.assert_array_equal(a.u1, b.u1)

    def test_seeds_differ(self):
        assert random_game(0, 3, 2) != random_game(1, 3, 2)

    def test_budget(self):
        with pytest.raises(ValueError, match="budget"):
            random_game(0, 12, 3)
        with pytest.raises(ValueError):
            random_game(0, 3, 2, node_budget=5)
        assert NODE_BUDGET == 10**5

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            random_game(0, 0, 2)
        with pytest.raises(ValueError):
            random_game(0, 2, 1)

    @pytest.mark.parametrize("seed", range(0, 100, 7))
    def test_seeded_games_are_small(self, seed):
        game = seeded_random_game(seed)
        assert validate(game).ok
        assert max(pure_strategy_count(game, p) for p in (1, 2)) <= 1 << 12


class TestGameFiles:
    @pytest.mark.parametrize("build", [counterexample_game, kuhn_poker, lambda: random_game(5, 3, 3)])
    def test_round_trip(self, build):
        game = build()
        assert load_game(save_game(game)) == game

    def test_path_round_trip(self, tmp_path, kuhn):
        path = tmp_path / "kuhn.json"
        write_game(kuhn, path)
        assert read_game(path) == kuhn

    def test_bad_probability_location(self, kuhn):
        doc = json.loads(save_game(kuhn))
        doc["root"]["chance"]["probs"][0] = 0.5
        with pytest.raises(GameParseError) as err:
            load_game(json.dumps(doc))
        assert err.value.location == "root.chance.probs"

    def test_small_drift_renormalised(self):
        doc = {"players": 2, "root": {"chance": {"probs": [0.5, 0.5 + 1e-10],
                                                  "children": [{"terminal": {"u1": 1}}, {"terminal": {"u1": -1}}]}}}
        game = load_game(json.dumps(doc))
        assert sum(game.body.probs) == pytest.approx(1.0, abs=1e-15)

    def test_non_zero_sum(self, obs1):
        doc = json.loads(save_game(obs1))
        doc["root"]["decision"]["children"][1]["decision"]["children"][1]["terminal"]["u2"] = 1.0
        with pytest.raises(GameValidationError, match="not zero-sum"):
            load_game(json.dumps(doc))

    def test_zero_sum_u2_accepted(self, obs1):
        doc = json.loads(save_game(obs1))
        doc["root"]["decision"]["children"][1]["decision"]["children"][1]["terminal"]["u2"] = -1.0
        assert load_game(json.dumps(doc)) == obs1

    def test_invalid_game_rejected(self, kuhn):
        text = save_game(kuhn.with_infosets({"J:pb": "J:"}))
        with pytest.raises(GameValidationError, match="perfect recall"):
            load_game(text)

    @pytest.mark.parametrize(
        "text, location",
        [
            ("{oops", "line 1 column 2"),
            ('{"players": 3, "root": {}}', "players"),
            ('{"players": 2}', "root"),
            ('{"players": 2, "root": {"terminal": {"u1": "x"}}}', "root.terminal.u1"),
            ('{"players": 2, "root": {"leaf": {}}}', "root"),
            ('{"players": 2, "root": {"decision": {"player": 1, "infoset": 7, "actions": [], "children": []}}}',
             "root.decision.infoset"),
        ],
    )
    def test_parse_errors(self, text, location):
        with pytest.raises(GameParseError) as err:
            load_game(text)
        assert err.value.location == location
