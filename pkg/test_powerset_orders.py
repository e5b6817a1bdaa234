"""Smyth, Hoare, Egli-Milner and Veinott comparisons of finite sets."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sublattice_closure
from eqlattice.exceptions import ContractViolation, LatticeError
from eqlattice.lattice_core import IntChain, Product
from eqlattice.powerset_orders import SetRelation, extremal_membership, powerset_compare

CHAIN = IntChain(1, 6)
SQUARE = Product([IntChain(1, 6), IntChain(1, 6)])


def test_smyth_and_hoare_on_a_chain():
    # B_2(3) = {3} against the abstract image {2}
    assert not powerset_compare(SetRelation.SMYTH, CHAIN, {3}, {2})
    assert not powerset_compare(SetRelation.HOARE, CHAIN, {3}, {2})
    assert powerset_compare(SetRelation.SMYTH, CHAIN, {2, 5}, {5})
    assert powerset_compare(SetRelation.HOARE, CHAIN, {2, 5}, {5})


def test_egli_milner_is_both():
    assert powerset_compare(SetRelation.EGLI_MILNER, CHAIN, {2, 5}, {5, 6})
    assert not powerset_compare(SetRelation.EGLI_MILNER, CHAIN, {1, 4}, {2, 3})
    assert powerset_compare(SetRelation.SMYTH, CHAIN, {1, 4}, {2, 3})


def test_equilibrium_sets_of_example_three():
    concrete = {(2, 3), (5, 4)}
    abstract = {(3, 2), (5, 6), (6, 6)}
    assert powerset_compare(SetRelation.HOARE, SQUARE, concrete, abstract)
    assert not powerset_compare(SetRelation.SMYTH, SQUARE, concrete, abstract)
    assert not powerset_compare(SetRelation.EGLI_MILNER, SQUARE, concrete, abstract)


def test_veinott_order():
    assert powerset_compare(SetRelation.VEINOTT, CHAIN, {1, 2}, {2, 3})
    assert not powerset_compare(SetRelation.VEINOTT, CHAIN, {1, 3}, {2})


def test_veinott_decides_non_sublattices_without_raising():
    antichain = {(1, 2), (2, 1)}
    assert not powerset_compare(SetRelation.VEINOTT, SQUARE, antichain, antichain)
    assert powerset_compare(SetRelation.VEINOTT, SQUARE, {(1, 1), (1, 2), (2, 1), (2, 2)}, {(2, 2)})


def test_non_members_are_rejected():
    with pytest.raises(LatticeError):
        powerset_compare(SetRelation.SMYTH, CHAIN, {0}, {1})


def test_parse_accepts_aliases():
    assert SetRelation.parse('em') is SetRelation.EGLI_MILNER
    assert SetRelation.parse('Egli_Milner') is SetRelation.EGLI_MILNER
    assert SetRelation.parse('s') is SetRelation.SMYTH
    with pytest.raises(ValueError):
        SetRelation.parse('plotkin')


def test_extremal_membership():
    flags = extremal_membership(SQUARE, {(2, 3), (5, 3)})
    assert flags.in_meet_family and flags.in_join_family and flags.in_sublattice

    flags = extremal_membership(SQUARE, {(1, 2), (2, 1)})
    assert not flags.in_meet_family and not flags.in_join_family and not flags.in_both

    flags = extremal_membership(SQUARE, {(1, 1), (1, 2), (2, 1)})
    assert flags.in_meet_family and not flags.in_join_family


def test_extremal_membership_of_empty_set():
    with pytest.raises(ContractViolation):
        extremal_membership(CHAIN, set())


set_laws = settings(max_examples=100, derandomize=True, deadline=None)
GRID = Product([IntChain(1, 3), IntChain(1, 3)])
ORDERS = [SetRelation.SMYTH, SetRelation.HOARE, SetRelation.EGLI_MILNER]


def finite_sets(L=GRID, min_size=1):
    return st.sets(st.sampled_from(L.enumerate()), min_size=min_size, max_size=5)


def with_meet(X, L=GRID):
    return set(X) | {L.meet(X)}


def with_join(X, L=GRID):
    return set(X) | {L.join(X)}


class TestExtremalCharacterizations:

    @set_laws
    @given(finite_sets(), finite_sets())
    def test_smyth_compares_meets(self, X, Y):
        X, Y = with_meet(X), with_meet(Y)
        assert powerset_compare(SetRelation.SMYTH, GRID, X, Y) == GRID.leq(GRID.meet(X), GRID.meet(Y))

    @set_laws
    @given(finite_sets(), finite_sets())
    def test_hoare_compares_joins(self, X, Y):
        X, Y = with_join(X), with_join(Y)
        assert powerset_compare(SetRelation.HOARE, GRID, X, Y) == GRID.leq(GRID.join(X), GRID.join(Y))

    @set_laws
    @given(finite_sets(), finite_sets())
    def test_egli_milner_compares_both(self, X, Y):
        X, Y = with_join(with_meet(X)), with_join(with_meet(Y))
        assert extremal_membership(GRID, X).in_both and extremal_membership(GRID, Y).in_both
        expected = GRID.leq(GRID.meet(X), GRID.meet(Y)) and GRID.leq(GRID.join(X), GRID.join(Y))
        assert powerset_compare(SetRelation.EGLI_MILNER, GRID, X, Y) == expected


class TestPreorderLaws:

    @set_laws
    @given(finite_sets())
    def test_reflexive(self, X):
        for rel in ORDERS:
            assert powerset_compare(rel, GRID, X, X)

    @set_laws
    @given(finite_sets(), finite_sets(), finite_sets())
    def test_transitive(self, X, Y, Z):
        for rel in ORDERS:
            if powerset_compare(rel, GRID, X, Y) and powerset_compare(rel, GRID, Y, Z):
                assert powerset_compare(rel, GRID, X, Z)

    @set_laws
    @given(finite_sets(), finite_sets(), finite_sets())
    def test_veinott_on_sublattices(self, X, Y, Z):
        X, Y, Z = (sublattice_closure(GRID, S) for S in (X, Y, Z))
        veinott = SetRelation.VEINOTT
        assert powerset_compare(veinott, GRID, X, X)
        if powerset_compare(veinott, GRID, X, Y) and powerset_compare(veinott, GRID, Y, Z):
            assert powerset_compare(veinott, GRID, X, Z)
        if powerset_compare(veinott, GRID, X, Y) and powerset_compare(veinott, GRID, Y, X):
            assert X == Y


SMALL = Product([IntChain(1, 2), IntChain(1, 2)])
SMALL_SETS = [
    set(c) for size in range(1, 5) for c in itertools.combinations(SMALL.enumerate(), size)
]
SMALL_SUBLATTICES = [S for S in SMALL_SETS if sublattice_closure(SMALL, S) == S]


@pytest.mark.parametrize('rel', ORDERS + [SetRelation.VEINOTT])
def test_transitivity_on_every_small_family(rel):
    family = SMALL_SUBLATTICES if rel is SetRelation.VEINOTT else SMALL_SETS
    related = {
        (i, j)
        for (i, X), (j, Y) in itertools.product(enumerate(family), repeat=2)
        if powerset_compare(rel, SMALL, X, Y)
    }
    for i, j in related:
        for k in range(len(family)):
            if (j, k) in related:
                assert (i, k) in related
    if rel is SetRelation.VEINOTT:
        assert all(i == j for i, j in related if (j, i) in related)
