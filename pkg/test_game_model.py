"""Best responses and exhaustive lattice-property checks."""
from fractions import Fraction

import pytest

from eqlattice.exceptions import ContractViolation, NoMaximum, UnsupportedOperation
from eqlattice.game_model import (
    Game,
    LatticeProperty,
    Utility,
    best_response,
    best_response_i,
    best_response_i_correspondence,
    check_lattice_property,
    is_supermodular_game,
    scalar_utility,
)
from eqlattice.lattice_core import IntChain, Product, RationalInterval
from eqlattice.powerset_orders import SetRelation, extremal_membership, powerset_compare

PLAYER1_RESPONSES = {1: {1, 2}, 2: {2}, 3: {2}, 4: {2, 5}, 5: {5}, 6: {5, 6}}
PLAYER2_RESPONSES = {1: {2, 3}, 2: {3}, 3: {3}, 4: {4}, 5: {4}, 6: {4}}


def test_payoffs_of_example1(example1):
    assert example1.payoff(0, (5, 5)) == (7,)
    assert example1.payoff(1, (5, 5)) == (5,)
    assert example1.payoff(0, (6, 1)) == (-1,)


@pytest.mark.parametrize('column, expected', sorted(PLAYER1_RESPONSES.items()))
def test_player1_best_responses(example1, column, expected):
    assert best_response_i(example1, 0, column) == frozenset(expected)


@pytest.mark.parametrize('row, expected', sorted(PLAYER2_RESPONSES.items()))
def test_player2_best_responses(example1, row, expected):
    assert best_response_i(example1, 1, row) == frozenset(expected)


def test_player_correspondence_maps_opponents_to_own_strategies(example1):
    B2 = best_response_i_correspondence(example1, 1)
    assert B2.domain == example1.spaces[0]
    assert B2.codomain == example1.spaces[1]
    assert B2.label == 'B_2'
    assert B2(1) == {2, 3}


def test_joint_best_response_is_the_product(example1):
    B = best_response(example1)
    assert B((1, 1)) == {(1, 2), (1, 3), (2, 2), (2, 3)}
    assert B((2, 3)) == {(2, 3)}


def test_best_responses_are_sublattices(example1):
    B = best_response(example1)
    for s in example1.profile_space.enumerate():
        assert extremal_membership(example1.profile_space, B(s)).in_sublattice


def test_best_response_is_egli_milner_monotone(example1):
    space = example1.profile_space
    B = best_response(example1)
    for low, high in space.covers():
        assert powerset_compare(SetRelation.EGLI_MILNER, space, B(low), B(high))
    assert powerset_compare(SetRelation.EGLI_MILNER, space, B(space.bot), B(space.top))


def test_example1_is_supermodular(example1):
    report = is_supermodular_game(example1)
    assert report.supermodular
    assert report.quasisupermodular
    assert all(p.own_quasisupermodular is None for p in report.players)


def test_vector_payoffs_without_a_maximum():
    space = IntChain(1, 2)
    incomparable = Utility(player=0, arity=2,
                           evaluate=lambda s: (1, 0) if s[0] == 1 else (0, 1))
    G = Game([space], [incomparable])
    with pytest.raises(NoMaximum) as info:
        G.best_response_i(0, ())
    assert info.value.player == 0


def test_infinite_space_needs_a_maximizer():
    interval = RationalInterval(0, 1)
    G = Game([interval, interval], [scalar_utility(0, lambda s: 0), scalar_utility(1, lambda s: 0)])
    with pytest.raises(UnsupportedOperation):
        G.best_response_i(0, Fraction(1, 2))


def test_closed_form_maximizer_is_used():
    interval = RationalInterval(0, 1)
    follow = Utility(player=0, arity=1, evaluate=lambda s: (0,), maximizer=lambda rest: rest)
    G = Game([interval, interval], [follow, scalar_utility(1, lambda s: 0)])
    assert G.best_response_i(0, Fraction(1, 3)) == {Fraction(1, 3)}


def test_componentwise_best_response():
    own = Product([IntChain(1, 3), IntChain(1, 3)])
    rival = IntChain(1, 3)

    def targets(s):
        (x1, x2), y = s
        return (-(x1 - y) ** 2, -(x2 - 2) ** 2)

    G = Game([own, rival], [
        Utility(player=0, arity=2, evaluate=targets, component_dependency=True),
        scalar_utility(1, lambda s: 0),
    ])
    assert G.best_response_i(0, 3) == {(3, 2)}
    assert G.best_response_i(0, 1) == {(1, 2)}
    assert G.best_response_i(1, (2, 2)) == {1, 2, 3}


def test_component_dependency_needs_a_product():
    G = Game([IntChain(1, 3), IntChain(1, 3)], [
        Utility(player=0, arity=2, evaluate=lambda s: (0, 0), component_dependency=True),
        scalar_utility(1, lambda s: 0),
    ])
    with pytest.raises(ContractViolation):
        G.best_response_i(0, 1)


def test_game_needs_matching_utilities():
    with pytest.raises(ContractViolation):
        Game([IntChain(1, 2)], [])


class TestLatticeProperties:

    square = Product([IntChain(1, 3), IntChain(1, 3)])
    chain = IntChain(1, 3)

    def test_product_is_supermodular(self):
        verdict = check_lattice_property(LatticeProperty.SUPERMODULAR, lambda s: s[0] * s[1], self.square)
        assert verdict.holds
        assert verdict.pairs_checked > 0

    def test_negated_product_is_not(self):
        verdict = check_lattice_property(LatticeProperty.SUPERMODULAR, lambda s: -s[0] * s[1], self.square)
        assert not verdict.holds
        witness = verdict.counterexample
        assert not self.square.leq(witness.lower, witness.upper)

    def test_monotone(self):
        assert check_lattice_property(LatticeProperty.MONOTONE, lambda x: x, self.chain).holds
        verdict = check_lattice_property(LatticeProperty.MONOTONE, lambda x: -x, self.chain)
        assert not verdict.holds
        assert (verdict.counterexample.lower, verdict.counterexample.upper) == (1, 2)

    def test_single_crossing_without_increasing_differences(self):
        weight = {1: -1, 2: 5, 3: 2}

        def f(x, y):
            return x * weight[y]

        differences = check_lattice_property(
            LatticeProperty.INCREASING_DIFFERENCES, f, self.chain, self.chain)
        crossing = check_lattice_property(LatticeProperty.SINGLE_CROSSING, f, self.chain, self.chain)
        assert not differences.holds
        assert crossing.holds

    def test_witness_limit(self):
        verdict = check_lattice_property(
            LatticeProperty.INCREASING_DIFFERENCES, lambda x, y: -x * y, self.chain, self.chain,
            max_witnesses=1)
        assert not verdict.holds
        assert len(verdict.counterexamples) == 1

    def test_binary_mode_needs_second_lattice(self):
        with pytest.raises(ContractViolation):
            check_lattice_property(LatticeProperty.SINGLE_CROSSING, lambda x, y: 0, self.chain)

    def test_infinite_domain_is_refused(self):
        with pytest.raises(UnsupportedOperation):
            check_lattice_property(LatticeProperty.MONOTONE, lambda x: x, RationalInterval(0, 1))


def test_decreasing_differences_game_is_flagged():
    chain = IntChain(1, 3)
    G = Game([chain, chain], [
        scalar_utility(0, lambda s: -(s[0] - (4 - s[1])) ** 2),
        scalar_utility(1, lambda s: s[0] * s[1]),
    ])
    report = is_supermodular_game(G)
    assert not report.supermodular
    assert report.players[1].supermodular
    first = report.players[0]
    assert not first.increasing_differences.holds
    assert first.single_crossing is not None and not first.single_crossing.holds
    assert not report.quasisupermodular
