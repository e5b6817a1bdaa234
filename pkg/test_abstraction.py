"""Galois connections: construction, validation and product (de)composition."""
from fractions import Fraction

import pytest

from eqlattice.abstraction import (
    GaloisConnection,
    alpha_s,
    ceil_abstraction,
    closure_operator,
    compose_product,
    decompose_product,
    gamma_s,
    gc_from_subset,
    identity_gc,
    is_principal_filter,
    is_relational,
    relational_witness,
    validate_gc,
)
from eqlattice.exceptions import ConstructionError
from eqlattice.lattice_core import IntChain, Product, RationalGrid, RationalInterval

CHAIN = IntChain(1, 6)
SQUARE = Product([IntChain(1, 6), IntChain(1, 6)])
RELATIONAL_MEMBERS = [(2, 2), (3, 4), (4, 4), (3, 5), (4, 5), (6, 6)]


def test_subset_abstraction_of_a_chain():
    gc = gc_from_subset(CHAIN, [3, 5, 6])
    assert [gc.alpha(c) for c in range(1, 7)] == [3, 3, 3, 5, 5, 6]
    assert gc.gamma(5) == 5
    assert gc.rho(4) == 5
    assert gc.finitely_disjunctive
    assert not gc.principal_filter
    validation = validate_gc(gc)
    assert validation.ok
    assert validation.flags['is_insertion']
    assert not validation.flags['principal_filter']


def test_principal_filter():
    assert is_principal_filter(gc_from_subset(CHAIN, [4, 5, 6]))
    assert not is_principal_filter(gc_from_subset(CHAIN, [2, 6]))


def test_abstraction_must_hold_the_top():
    with pytest.raises(ConstructionError) as info:
        gc_from_subset(CHAIN, [3, 5])
    assert info.value.witness == 6


def test_abstraction_members_must_be_elements():
    with pytest.raises(ConstructionError) as info:
        gc_from_subset(CHAIN, [3, 6, 7])
    assert info.value.witness == 7


def test_relational_abstraction_decomposes():
    gc = gc_from_subset(SQUARE, RELATIONAL_MEMBERS)
    first, second = decompose_product(gc)
    assert first.image == {2, 3, 4, 6}
    assert second.image == {2, 4, 5, 6}
    assert first.alpha(1) == 2 and first.alpha(5) == 6
    assert validate_gc(first).ok and validate_gc(second).ok
    assert is_relational(gc)
    assert relational_witness(gc) == (2, 4)


def test_product_of_components_is_not_relational():
    gc = compose_product([gc_from_subset(CHAIN, [3, 5, 6]), gc_from_subset(CHAIN, [2, 6])])
    assert not is_relational(gc)
    assert relational_witness(gc) is None
    assert gc.alpha((4, 3)) == (5, 6)
    assert validate_gc(gc).ok


def test_moore_family_that_is_not_join_closed():
    square = Product([IntChain(1, 3), IntChain(1, 3)])
    gc = gc_from_subset(square, [(1, 1), (1, 2), (2, 1), (3, 3)])
    assert not gc.finitely_disjunctive
    assert gc.alpha((2, 2)) == (3, 3)
    validation = validate_gc(gc)
    assert validation.ok
    assert not validation.flags['finitely_disjunctive']


def test_identity_connection():
    gc = identity_gc(SQUARE)
    validation = validate_gc(gc)
    assert validation.ok
    assert all(validation.flags.values())


def test_broken_adjunction_is_reported():
    chain = IntChain(1, 3)
    gc = GaloisConnection(concrete=chain, abstract=chain, alpha=lambda c: 1, gamma=lambda a: a)
    validation = validate_gc(gc)
    assert not validation.ok
    assert not validation.laws['adjunction']
    failure = next(f for f in validation.failures if f.law == 'adjunction')
    assert failure.witness == (2, 1)


def test_closure_laws():
    laws = closure_operator(gc_from_subset(CHAIN, [3, 5, 6])).check_laws()
    assert laws == {'monotone': True, 'extensive': True, 'idempotent': True}


def test_lifted_maps():
    gc = gc_from_subset(CHAIN, [3, 5, 6])
    assert alpha_s(gc, {1, 4}) == {3, 5}
    assert gamma_s(gc, {3, 6}) == {3, 6}


class TestCeilingAbstraction:

    def test_interval(self):
        gc = ceil_abstraction(3, RationalInterval(Fraction(3, 2), Fraction(5, 2)))
        assert gc.alpha(Fraction(17771, 10000)) == Fraction(889, 500)
        assert gc.alpha(Fraction(3, 2)) == Fraction(3, 2)
        assert gc.abstract.cardinality() == 1001
        assert not gc.principal_filter

    def test_top_off_the_grid(self):
        with pytest.raises(ConstructionError):
            ceil_abstraction(1, RationalInterval(0, Fraction(1, 3)))

    def test_finite_grid(self):
        grid = RationalGrid(1, 2, Fraction(1, 20))
        gc = ceil_abstraction(1, grid)
        assert gc.abstract.cardinality() == 11
        assert gc.alpha(Fraction(21, 20)) == Fraction(11, 10)
        assert validate_gc(gc).ok

    def test_grid_not_closed_under_ceiling(self):
        with pytest.raises(ConstructionError) as info:
            ceil_abstraction(1, RationalGrid(0, 1, Fraction(1, 3)))
        assert info.value.witness == Fraction(1, 3)

    def test_product(self):
        interval = RationalInterval(Fraction(3, 2), Fraction(5, 2))
        gc = ceil_abstraction(1, Product([interval, interval]))
        assert gc.alpha((Fraction(3, 2), Fraction(151, 100))) == (Fraction(3, 2), Fraction(8, 5))

    def test_negative_digits(self):
        with pytest.raises(ConstructionError):
            ceil_abstraction(-1, IntChain(1, 2))
