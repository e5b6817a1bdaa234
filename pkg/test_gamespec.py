"""Game and abstraction file parsing."""
from fractions import Fraction

import pytest

from conftest import read_spec
from eqlattice.exceptions import ConstructionError, GameSpecError
from games.gamespec import parse_abstraction, parse_game, serialize_game

HEADER = """\
game finite-matrix
players 2
strategies 1 int 1 2
strategies 2 int 1 2
"""


def test_example1_file(example1):
    assert example1.kind == 'finite-matrix'
    assert example1.players == 2
    assert example1.profile_space.cardinality() == 36
    assert example1.payoff(0, (1, 1)) == (6,)
    assert example1.payoff(1, (6, 1)) == (-3,)


def test_serialized_game_reads_back(example1):
    again = parse_game(serialize_game(example1))
    assert all(
        again.payoff(i, s) == example1.payoff(i, s)
        for s in example1.profile_space.enumerate() for i in range(2)
    )


def test_three_player_entries():
    text = (
        "game finite-matrix\nplayers 3\n"
        "strategies 1 int 1 2\nstrategies 2 int 1 1\nstrategies 3 grid 0 1/2 1/2\n"
        "payoffs\n"
        "entry 1 1 0 : 1,2,3\n"
        "entry 1 1 1/2 : 0,0,4\n"
        "entry 2 1 0 : 2,2,1\n"
        "entry 2 1 1/2 : 3,0,-1/2\n"
        "end\n"
    )
    G = parse_game(text)
    assert G.payoff(2, (2, 1, Fraction(1, 2))) == (Fraction(-1, 2),)
    assert G.best_response_i(2, (1, 1)) == {Fraction(1, 2)}
    assert 'entry 2 1 1/2 : 3,0,-1/2' in serialize_game(G)


def test_bertrand_kinds():
    G = parse_game(read_spec('bertrand3.game'))
    assert G.spaces[0].cardinality() == 27
    floored = parse_game(read_spec('bertrand3_floor.game'))
    assert floored.spaces[0].cardinality() == 17
    assert floored.metadata['floor'] is True
    assert not parse_game(read_spec('bertrand2.game')).profile_space.is_finite
    assert parse_game('game bertrand2\nstep 1/2\n').profile_space.cardinality() == 81


def test_firm_override():
    G = parse_game('game bertrand3\nfirm 1 0 0 0 0 0\n')
    assert G.payoff(0, (1, 1, 1)) == (0,)


@pytest.mark.parametrize('text, line, column', [
    ('', 1, 1),
    ('players 2\n', 1, 1),
    ('game poker\n', 1, 6),
    (HEADER + 'payoffs\n1,1 2,2\n1,1 2,2\n', 5, 1),
    (HEADER + 'payoffs\nend\n', 5, 1),
    (HEADER + 'payoffs\n1,x 2,2\n1,1 2,2\nend\n', 6, 1),
    (HEADER + 'payoffs\n1,1 2,2 3,3\n1,1 2,2\nend\n', 6, 9),
    (HEADER + 'payoffs\n1,1 2,2\nend\n', 6, 1),
    (HEADER + 'payoffs\n1,1,1 2,2\n1,1 2,2\nend\n', 6, 1),
    (HEADER + 'bogus 1\n', 5, 1),
    ('game finite-matrix\nplayers 2\nstrategies 3 int 1 2\n', 3, 12),
    ('game finite-matrix\nplayers 2\nstrategies 1 int 1 x\n', 3, 20),
    ('game bertrand3\nfloor maybe\n', 2, 7),
])
def test_parse_errors_carry_a_location(text, line, column):
    with pytest.raises(GameSpecError) as info:
        parse_game(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_comments_and_blank_lines_are_ignored():
    text = "# a comment\n\n" + HEADER + "payoffs  # block\n1,1 2,2\n\n3,3 4,4\nend\n"
    G = parse_game(text)
    assert G.payoff(0, (2, 1)) == (3,)


class TestAbstractionFiles:

    def test_per_player_members(self, load_abstraction):
        parsed = load_abstraction('ex3.abs')
        assert not parsed.is_product
        assert [gc.image for gc in parsed.gcs] == [{3, 5, 6}, {2, 6}]
        assert parsed.connection().alpha((1, 3)) == (3, 6)

    def test_product_line(self, load_abstraction):
        parsed = load_abstraction('ex_comp.abs')
        assert parsed.is_product
        assert parsed.product.abstract.cardinality() == 6

    def test_decimal_members(self, bertrand3, load_abstraction):
        first = load_abstraction('bertrand3.abs', bertrand3).gcs[0]
        assert first.abstract.bot == Fraction(7, 4)

    def test_ceil_and_identity(self):
        G = parse_game(read_spec('bertrand2.game'))
        parsed = parse_abstraction('ceil 3\nplayer2: identity\n', G)
        assert parsed.gcs[0].label == 'cl_3'
        assert parsed.gcs[1].label == 'player2'
        price = (Fraction(3, 2), Fraction(17771, 10000))
        assert parsed.gcs[0].alpha(price) == (Fraction(3, 2), Fraction(889, 500))

    def test_missing_top_is_a_construction_error(self, example1):
        with pytest.raises(ConstructionError):
            parse_abstraction('player1: 3 5\nplayer2: 6\n', example1)

    @pytest.mark.parametrize('text, line', [
        ('', 1),
        ('player1: 6\n', 1),
        ('player1: 6\nplayer1: 5 6\nplayer2: 6\n', 2),
        ('player3: 6\n', 1),
        ('player1: 6\nplayer2: 6 x\n', 2),
        ('player1: 6\nplayer2: 6\nproduct: (6,6)\n', 1),
        ('player1: 6\nwidth 3\n', 2),
    ])
    def test_errors(self, example1, text, line):
        with pytest.raises(GameSpecError) as info:
            parse_abstraction(text, example1)
        assert info.value.line == line
