"""
Preorders on powersets of a lattice and the extremal-membership families.
"""
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from eqlattice.exceptions import ContractViolation, LatticeError
from eqlattice.lattice_core import Elem, Lattice


class SetRelation(Enum):
    SMYTH = 'smyth'
    HOARE = 'hoare'
    EGLI_MILNER = 'egli-milner'
    VEINOTT = 'veinott'

    @classmethod
    def parse(cls, name: str) -> 'SetRelation':
        aliases = {'s': cls.SMYTH, 'h': cls.HOARE, 'em': cls.EGLI_MILNER, 'v': cls.VEINOTT}
        key = name.strip().lower().replace('_', '-')
        if key in aliases:
            return aliases[key]
        for relation in cls:
            if relation.value == key:
                return relation
        raise ValueError(f"unknown set relation: {name!r}")


@dataclass(frozen=True)
class ExtremalFlags:
    """Membership in the meet-, join-, both- and sublattice families."""

    in_meet_family: bool
    in_join_family: bool
    in_both: bool
    in_sublattice: bool


def _members(L: Lattice, X: Iterable[Elem]) -> list:
    items = list(X)
    for x in items:
        if not L.contains(x):
            raise LatticeError(f"{x!r} is not an element of {L!r}")
    return items


def _smyth(L, xs, ys) -> bool:
    return all(any(L.leq(x, y) for x in xs) for y in ys)


def _hoare(L, xs, ys) -> bool:
    return all(any(L.leq(x, y) for y in ys) for x in xs)


def powerset_compare(rel: SetRelation, L: Lattice, X: Iterable[Elem], Y: Iterable[Elem]) -> bool:
    """Decide X rel Y by direct quantification over the two finite sets."""
    xs = _members(L, X)
    ys = _members(L, Y)
    if rel is SetRelation.SMYTH:
        return _smyth(L, xs, ys)
    if rel is SetRelation.HOARE:
        return _hoare(L, xs, ys)
    if rel is SetRelation.EGLI_MILNER:
        return _smyth(L, xs, ys) and _hoare(L, xs, ys)
    x_set, y_set = set(xs), set(ys)
    return all(
        L.meet2(x, y) in x_set and L.join2(x, y) in y_set
        for x in xs
        for y in ys
    )


def extremal_membership(L: Lattice, X: Iterable[Elem]) -> ExtremalFlags:
    items = _members(L, X)
    if not items:
        raise ContractViolation("extremal membership of an empty set")
    members = set(items)
    has_meet = L.meet(items) in members
    has_join = L.join(items) in members
    # for finite sets pairwise closure gives closure under every nonempty subset
    closed = all(
        L.meet2(a, b) in members and L.join2(a, b) in members
        for a, b in itertools.combinations(items, 2)
    )
    return ExtremalFlags(
        in_meet_family=has_meet,
        in_join_family=has_join,
        in_both=has_meet and has_join,
        in_sublattice=closed,
    )
