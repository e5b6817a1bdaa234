"""Shared fixtures: games and abstractions loaded from specs/, plus set-closure helpers."""
import itertools
from fractions import Fraction
from pathlib import Path

import pytest

from eqlattice.bertrand import bertrand3_model
from games.gamespec import parse_abstraction, parse_game

SPECS_DIR = Path(__file__).resolve().parent / 'specs'


def read_spec(name: str) -> str:
    return (SPECS_DIR / name).read_text(encoding='utf-8')


def twentieths(*numerators):
    return tuple(Fraction(n, 20) for n in numerators)


def moore_closure(L, seeds):
    """Smallest meet-closed superset of seeds holding the top of L."""
    members = set(seeds) | {L.top}
    while True:
        meets = {L.meet2(a, b) for a, b in itertools.combinations(members, 2)} - members
        if not meets:
            return members
        members |= meets


def sublattice_closure(L, seeds):
    """Smallest meet- and join-closed superset of a nonempty seed set."""
    members = set(seeds)
    while True:
        pairs = list(itertools.combinations(members, 2))
        grown = {L.meet2(a, b) for a, b in pairs} | {L.join2(a, b) for a, b in pairs}
        if grown <= members:
            return members
        members |= grown


@pytest.fixture
def example1():
    return parse_game(read_spec('example1.game'))


@pytest.fixture
def load_abstraction(example1):
    def load(name, game=None):
        return parse_abstraction(read_spec(name), game or example1)
    return load


@pytest.fixture(scope='session')
def bertrand3():
    # shared so the best-response cache survives across tests
    return bertrand3_model()
