"""Bertrand oligopoly models: exact equilibria, abstractions and the floor counterexample."""
from fractions import Fraction

import pytest

from conftest import twentieths
from eqlattice.abstract_games import abstract_best_response_game, check_theorem_condition, restrict_game
from eqlattice.abstraction import ceil_abstraction
from eqlattice.bertrand import (
    DEFAULT_PRODUCTS,
    Bertrand3Params,
    bertrand2_exact_equilibria,
    bertrand2_model,
    bertrand3_model,
    sgn,
)
from eqlattice.exceptions import ContractViolation
from eqlattice.fixpoint_solvers import Direction, rt_solve
from eqlattice.game_model import LatticeProperty, best_response, check_lattice_property
from eqlattice.powerset_orders import SetRelation, extremal_membership, powerset_compare

EQUILIBRIUM = twentieths(36, 38, 39)

EXACT_LNE = (
    (Fraction(4940854, 2778745), Fraction(5281784, 2778745)),
    (Fraction(5497457, 2778745), Fraction(10699993, 5557490)),
)
EXACT_GNE = (
    (Fraction(6033654, 2778745), Fraction(5848294, 2778745)),
    (Fraction(5885617, 2778745), Fraction(11224753, 5557490)),
)
CEIL3_LNE = (
    (Fraction(10669, 6000), Fraction(6653, 3500)),
    (Fraction(79139, 40000), Fraction(77017, 40000)),
)
CEIL3_GNE = (
    (Fraction(91199, 42000), Fraction(14733, 7000)),
    (Fraction(42363, 20000), Fraction(80793, 40000)),
)


def test_sgn():
    assert (sgn(Fraction(-1, 3)), sgn(0), sgn(Fraction(2))) == (-1, 0, 1)


class TestThreeFirms:

    def test_least_equilibrium(self, bertrand3):
        trace = rt_solve(bertrand3, Direction.LFP)
        assert trace.result == EQUILIBRIUM
        assert trace.distinct_iterates() == [
            twentieths(20, 20, 20),
            twentieths(32, 20, 20),
            twentieths(32, 35, 20),
            twentieths(32, 35, 39),
            twentieths(36, 35, 39),
            twentieths(36, 38, 39),
        ]
        # two moving sweeps and a stationary one
        assert (trace.sweeps, trace.best_response_calls) == (3, 9)

    def test_greatest_equilibrium(self, bertrand3):
        trace = rt_solve(bertrand3, Direction.GFP)
        assert trace.result == EQUILIBRIUM
        assert trace.best_response_calls == 9

    @pytest.mark.parametrize('direction, calls', [(Direction.LFP, 12), (Direction.GFP, 9)])
    def test_firm_two_first(self, bertrand3, direction, calls):
        trace = rt_solve(bertrand3, direction, order=[1, 0, 2])
        assert trace.result == EQUILIBRIUM
        assert trace.best_response_calls == calls

    def test_sweep_order_must_cover_every_firm(self, bertrand3):
        with pytest.raises(ContractViolation):
            rt_solve(bertrand3, order=[0, 2])

    def test_best_responses_rise_along_the_diagonal(self, bertrand3):
        space = bertrand3.profile_space
        B = best_response(bertrand3)
        prices = bertrand3.spaces[0].enumerate()
        for low, high in zip(prices, prices[1:]):
            s = (low, low, low)
            assert extremal_membership(space, B(s)).in_sublattice
            for i in range(3):
                raised = s[:i] + (high,) + s[i + 1:]
                assert powerset_compare(SetRelation.EGLI_MILNER, space, B(s), B(raised))

    def test_profit_is_exact(self, bertrand3):
        profile = (Fraction(27, 20), Fraction(13, 10), Fraction(9, 5))
        assert bertrand3.payoff(0, profile) == (Fraction('173.03125'),)

    def test_restricted_game(self, bertrand3, load_abstraction):
        gcs = load_abstraction('bertrand3.abs', bertrand3).gcs
        assert [gc.abstract.cardinality() for gc in gcs] == [9, 11, 9]
        assert [gc.principal_filter for gc in gcs] == [False, True, True]
        game = restrict_game(bertrand3, gcs)
        low = rt_solve(game.derived_game, Direction.LFP)
        high = rt_solve(game.derived_game, Direction.GFP)
        assert game.concretize(low.result) == EQUILIBRIUM
        assert game.concretize(high.result) == EQUILIBRIUM
        assert (low.best_response_calls, high.best_response_calls) == (6, 9)

    def test_correctness_condition(self, bertrand3, load_abstraction):
        verdict = check_theorem_condition(bertrand3, load_abstraction('bertrand3.abs', bertrand3).gcs)
        assert verdict.holds
        assert not verdict.holds_unconditionally


def test_floored_profits_lose_increasing_differences():
    G = bertrand3_model(Bertrand3Params(price_lo=Fraction(13, 10), price_hi=Fraction(21, 10),
                                        floor_payoffs=True))
    space = G.profile_space
    grid = G.spaces[0]
    assert grid.cardinality() == 17

    verdict = check_lattice_property(
        LatticeProperty.INCREASING_DIFFERENCES,
        lambda x, rest: G.payoff(0, space.splice(rest, 0, x)),
        grid,
        G.opponents_space(0),
    )
    assert not verdict.holds
    witnesses = {(w.lower, w.upper): (w.left, w.right) for w in verdict.counterexamples}
    lower = (Fraction(13, 10), (Fraction(13, 10), Fraction(9, 5)))
    upper = (Fraction(27, 20), (Fraction(13, 10), Fraction(37, 20)))
    assert witnesses[(lower, upper)] == ((30,), (29,))


def test_unfloored_profits_keep_increasing_differences(bertrand3):
    space = bertrand3.profile_space
    verdict = check_lattice_property(
        LatticeProperty.INCREASING_DIFFERENCES,
        lambda x, rest: bertrand3.payoff(0, space.splice(rest, 0, x)),
        bertrand3.spaces[0],
        bertrand3.opponents_space(0),
    )
    assert verdict.holds


class TestTwoFirms:

    def test_maximizer_coefficients(self):
        first, second = DEFAULT_PRODUCTS[0]
        assert first.coefficients() == (Fraction(73, 42), Fraction(1, 42), Fraction(2, 21), Fraction(4, 21))
        assert second.coefficients()[1] == Fraction(1, 21)

    def test_exact_equilibria(self):
        lne, gne = bertrand2_exact_equilibria()
        assert lne == EXACT_LNE
        assert gne == EXACT_GNE

    def test_closed_form_best_response(self):
        G = bertrand2_model()
        assert not G.profile_space.is_finite
        (response,) = G.best_response_i(0, EXACT_LNE[1])
        assert response == EXACT_LNE[0]

    def test_ceiling_abstraction_of_responses(self):
        G = bertrand2_model()
        game = abstract_best_response_game(G, [ceil_abstraction(3, space) for space in G.spaces])
        low = rt_solve(game.derived_game, Direction.LFP)
        high = rt_solve(game.derived_game, Direction.GFP)
        assert low.result == CEIL3_LNE
        assert high.result == CEIL3_GNE
        assert (low.best_response_calls, high.best_response_calls) == (16, 16)

        space = G.profile_space
        assert space.leq(EXACT_LNE, low.result)
        assert space.leq(EXACT_GNE, high.result)
        assert low.result[1][1] - EXACT_LNE[1][1] == Fraction(2148733, 22229960000)

    def test_grid_model_scans_each_product(self):
        G = bertrand2_model(price_step=Fraction(1, 2))
        assert G.profile_space.cardinality() == 81
        responses = G.best_response_i(0, (Fraction(2), Fraction(2)))
        assert responses
        assert all(G.spaces[0].contains(r) for r in responses)

    @pytest.mark.parametrize('step', [Fraction(1, 2), Fraction(1, 4)])
    def test_grid_model_has_ordered_extremes(self, step):
        G = bertrand2_model(price_step=step)
        low = rt_solve(G, Direction.LFP).result
        high = rt_solve(G, Direction.GFP).result
        assert G.profile_space.leq(low, high)
