"""End-to-end checks that the extension module exposes working operations.

Expected values are derived independently of the library: sphere sizes from
the free-group growth formula, ratios and tolerances by hand, game verdicts
by enumerating the small trees.
"""

from fractions import Fraction

import pytest

import shiftgame as sg

FIXTURE = "depth 3\nalphabet 3\nrule 0[0-2][01]|1[01]0\npayoff 10010110\n"


def test_group_arithmetic():
    z = sg.Group.from_expression("Z")
    assert z.describe() == "Z"
    assert z.multiply("2", "3") == "5"
    assert z.inverse("4") == "-4"
    assert z.word_length("-7") == 7

    f2 = sg.Group.from_expression("F2")
    # Free-group spheres grow as 4 * 3^(r-1).
    assert [len(f2.sphere(r)) for r in range(4)] == [1, 4, 12, 36]
    assert len(f2.ball(2)) == 1 + 4 + 12
    assert f2.multiply("ab", "Ba") == "aa"


def test_layer_ratios_and_spread():
    layers = sg.LayerSystem(sg.Group.from_expression("Z"))
    # On Z with |g| = 2 the layer ratio meets the bound exactly.
    assert layers.folner_ratio(30, "2") == Fraction(29, 31)
    assert layers.folner_ratio(1, "2") == Fraction(0)
    assert layers.appropriate_spread("2", 5) == 2


def test_tolerance_grid():
    assert sg.epsilon_max(3) == Fraction(39, 1250)
    assert sg.epsilon_max(1) == Fraction(839, 10000)


def test_window_graph_classification():
    graph = sg.build_graph(["11"], 2)
    assert graph.vertices == ["00", "01", "10"]
    assert graph.window == 2

    c0, c1, shared = graph.double_loop()
    assert c0 == ["00"]
    assert c1 == ["00", "01", "10"]
    assert shared == "00"

    right, left = graph.good_flags()
    assert right == [True, True, True]
    assert left == [True, True, True]
    assert "peripheries=2" in graph.to_dot()


def test_bits_round_trip_through_a_window():
    origin, symbols = sg.encode_bits("10110")
    assert set(symbols) <= {"0", "1"}
    assert sg.decode_bits(origin, symbols, 5) == [1, 0, 1, 1, 0]


def test_game_solve_and_rule_transfer():
    verdict = sg.solve_fixture(FIXTURE)
    assert verdict == {"winner": "I", "positions": 16, "moves": 4, "verified": True}

    transferred = sg.transfer_rules(FIXTURE)
    assert transferred["extended_winner"] == "I"
    assert transferred["rules_winner"] == "I"
    assert transferred["verified"]


def test_shift_transfer_wins_the_base_game():
    verdict = sg.transfer_shift(1, payoff="10")
    assert verdict["aux_winner"] == "I"
    assert verdict["aux_depth"] == 9
    assert verdict["aux_positions"] == 2**10 - 1
    assert verdict["base_winner"] == "I"
    assert verdict["verified"]


def test_errors_surface_as_exceptions():
    with pytest.raises(sg.ShiftgameError, match="unknown group expression"):
        sg.Group.from_expression("BOGUS")
    with pytest.raises(sg.ShiftgameError, match="payoff bitmap needs 4 bits"):
        sg.transfer_shift(2, payoff="101")
