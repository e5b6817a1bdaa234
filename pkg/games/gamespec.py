"""
Parsers for game and abstraction files, and the game serializer.

Both formats are line oriented; ``#`` starts a comment. See
docs/FORMAT_REFERENCE.md for the grammar.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from eqlattice.abstraction import (
    GaloisConnection,
    ceil_abstraction,
    compose_product,
    gc_from_subset,
    identity_gc,
)
from eqlattice.bertrand import (
    DEFAULT_FIRMS,
    Bertrand3Params,
    FirmDemand,
    bertrand2_model,
    bertrand3_model,
)
from eqlattice.exceptions import ContractViolation, GameSpecError, LatticeError
from eqlattice.formatting import format_rational
from eqlattice.game_model import Game, Utility
from eqlattice.lattice_core import Elem, IntChain, Lattice, Product, RationalGrid

logger = logging.getLogger('games')

GAME_KINDS = ('finite-matrix', 'bertrand3', 'bertrand2')

Token = Tuple[str, int]


def _tokens(line: str) -> List[Token]:
    """Whitespace-separated tokens with their 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r'\S+', line)]


def _lines(text: str) -> List[Tuple[int, str]]:
    numbered = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if line.strip():
            numbered.append((number, line))
    return numbered


def _rational(token: Token, line: int) -> Fraction:
    text, column = token
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise GameSpecError(f"not an exact rational: {text!r}", line, column)


def _integer(token: Token, line: int) -> int:
    value = _rational(token, line)
    if value.denominator != 1:
        raise GameSpecError(f"expected an integer, got {token[0]!r}", line, token[1])
    return int(value)


def _expect(tokens: List[Token], count: int, line: int, usage: str):
    if len(tokens) != count:
        column = tokens[min(len(tokens), count) - 1][1] if tokens else 1
        raise GameSpecError(f"expected '{usage}'", line, column)


def _player_index(token: Token, players: int, line: int) -> int:
    index = _integer(token, line)
    if not 1 <= index <= players:
        raise GameSpecError(f"player {index} out of range 1..{players}", line, token[1])
    return index - 1


def _strategy_space(tokens: List[Token], line: int) -> Lattice:
    kind = tokens[2][0]
    try:
        if kind == 'int':
            _expect(tokens, 5, line, 'strategies <player> int <lo> <hi>')
            return IntChain(_integer(tokens[3], line), _integer(tokens[4], line))
        if kind == 'grid':
            _expect(tokens, 6, line, 'strategies <player> grid <lo> <hi> <step>')
            return RationalGrid(*(_rational(t, line) for t in tokens[3:6]))
    except LatticeError as e:
        raise GameSpecError(str(e), line, tokens[3][1])
    raise GameSpecError(f"unknown strategy space kind {kind!r}", line, tokens[2][1])


def _payoff_cell(token: Token, players: int, line: int) -> Tuple[Fraction, ...]:
    text, column = token
    parts = text.split(',')
    if len(parts) != players:
        raise GameSpecError(f"payoff cell {text!r} needs {players} comma-separated values", line, column)
    return tuple(_rational((part, column), line) for part in parts)


class _GameFile:
    """Accumulates the directives of one game file."""

    def __init__(self):
        self.kind: Optional[str] = None
        self.players: Optional[int] = None
        self.spaces: Dict[int, Lattice] = {}
        self.rows: List[Tuple[int, List[Token]]] = []
        self.entries: List[Tuple[int, List[Token], List[Token]]] = []
        self.payoff_block_line: Optional[int] = None
        self.prices: Optional[Tuple[Fraction, Fraction, Fraction]] = None
        self.step: Optional[Fraction] = None
        self.floor = False
        self.firms: Dict[int, FirmDemand] = {}


def parse_game(text: str) -> Game:
    """
    Build a Game from a game file.

    Finite-matrix payoff rows are listed in ascending order of player 1's
    strategies, and cells in ascending order of player 2's.

    Raises:
        GameSpecError: malformed input, with line and column
    """
    spec = _GameFile()
    in_block = False

    for number, line in _lines(text):
        tokens = _tokens(line)
        keyword = tokens[0][0]

        if in_block:
            if keyword == 'end':
                in_block = False
            elif any(t[0] == ':' for t in tokens):
                split = next(k for k, t in enumerate(tokens) if t[0] == ':')
                spec.entries.append((number, tokens[:split], tokens[split + 1:]))
            else:
                spec.rows.append((number, tokens))
            continue

        if spec.kind is None and keyword != 'game':
            raise GameSpecError("a game file must start with 'game <kind>'", number, tokens[0][1])

        if keyword == 'game':
            _expect(tokens, 2, number, 'game <kind>')
            if tokens[1][0] not in GAME_KINDS:
                raise GameSpecError(f"unknown game kind {tokens[1][0]!r}", number, tokens[1][1])
            spec.kind = tokens[1][0]
        elif keyword == 'players':
            _expect(tokens, 2, number, 'players <n>')
            spec.players = _integer(tokens[1], number)
            if spec.players < 1:
                raise GameSpecError("a game needs at least one player", number, tokens[1][1])
        elif keyword == 'strategies':
            if spec.players is None:
                raise GameSpecError("'players' must precede 'strategies'", number, tokens[0][1])
            if len(tokens) < 3:
                raise GameSpecError("expected 'strategies <player> <kind> ...'", number, tokens[0][1])
            spec.spaces[_player_index(tokens[1], spec.players, number)] = _strategy_space(tokens, number)
        elif keyword == 'payoffs':
            spec.payoff_block_line = number
            in_block = True
        elif keyword == 'prices':
            _expect(tokens, 4, number, 'prices <lo> <hi> <step>')
            spec.prices = tuple(_rational(t, number) for t in tokens[1:4])
        elif keyword == 'step':
            _expect(tokens, 2, number, 'step <price step>')
            spec.step = _rational(tokens[1], number)
        elif keyword == 'floor':
            _expect(tokens, 2, number, 'floor on|off')
            if tokens[1][0] not in ('on', 'off'):
                raise GameSpecError("expected 'on' or 'off'", number, tokens[1][1])
            spec.floor = tokens[1][0] == 'on'
        elif keyword == 'firm':
            _expect(tokens, 7, number, 'firm <i> <base> <cross> <linear> <quadratic> <cost>')
            index = _player_index(tokens[1], len(DEFAULT_FIRMS), number)
            spec.firms[index] = FirmDemand(*(_rational(t, number) for t in tokens[2:7]))
        else:
            raise GameSpecError(f"unknown directive {keyword!r}", number, tokens[0][1])

    if spec.kind is None:
        raise GameSpecError("empty game file", 1, 1)
    if in_block:
        raise GameSpecError("payoff block is missing its 'end'", spec.payoff_block_line, 1)

    try:
        if spec.kind == 'bertrand3':
            return _build_bertrand3(spec)
        if spec.kind == 'bertrand2':
            return bertrand2_model(price_step=spec.step)
    except LatticeError as e:
        raise GameSpecError(f"invalid {spec.kind} parameters: {e}")
    return _build_matrix_game(spec)


def _build_bertrand3(spec: _GameFile) -> Game:
    firms = tuple(spec.firms.get(i, firm) for i, firm in enumerate(DEFAULT_FIRMS))
    params = Bertrand3Params(firms=firms, floor_payoffs=spec.floor)
    if spec.prices is not None:
        lo, hi, step = spec.prices
        params = Bertrand3Params(firms=firms, price_lo=lo, price_hi=hi, price_step=step,
                                 floor_payoffs=spec.floor)
    return bertrand3_model(params)


def _coerce_profile(spaces: List[Lattice], tokens: List[Token], line: int) -> Tuple:
    if len(tokens) != len(spaces):
        column = tokens[0][1] if tokens else 1
        raise GameSpecError(f"a profile needs {len(spaces)} strategies", line, column)
    profile = []
    for space, token in zip(spaces, tokens):
        try:
            profile.append(space.coerce(token[0]))
        except LatticeError as e:
            raise GameSpecError(str(e), line, token[1])
    return tuple(profile)


def _build_matrix_game(spec: _GameFile) -> Game:
    if spec.players is None:
        raise GameSpecError("missing 'players' directive")
    missing = [i + 1 for i in range(spec.players) if i not in spec.spaces]
    if missing:
        raise GameSpecError(f"missing strategy declarations for players {missing}")
    if spec.payoff_block_line is None:
        raise GameSpecError("missing payoff block")

    n = spec.players
    spaces = [spec.spaces[i] for i in range(n)]
    table: Dict[Tuple, Tuple[Fraction, ...]] = {}

    if spec.rows:
        if n != 2:
            raise GameSpecError("matrix rows are only allowed for two players, use 'entry' lines",
                                spec.rows[0][0], 1)
        rows_expected = spaces[0].enumerate()
        columns_expected = spaces[1].enumerate()
        if len(spec.rows) != len(rows_expected):
            raise GameSpecError(
                f"payoff matrix has {len(spec.rows)} rows, player 1 has {len(rows_expected)} strategies",
                spec.rows[-1][0], 1,
            )
        for (number, cells), x in zip(spec.rows, rows_expected):
            if len(cells) != len(columns_expected):
                raise GameSpecError(
                    f"row has {len(cells)} cells, player 2 has {len(columns_expected)} strategies",
                    number, cells[-1][1],
                )
            for cell, y in zip(cells, columns_expected):
                table[(x, y)] = _payoff_cell(cell, n, number)

    for number, left, right in spec.entries:
        if left and left[0][0] == 'entry':
            left = left[1:]
        if len(right) != 1:
            raise GameSpecError("expected one payoff cell after ':'", number, right[0][1] if right else 1)
        profile = _coerce_profile(spaces, left, number)
        if profile in table:
            raise GameSpecError(f"duplicate payoff entry for {profile}", number, left[0][1])
        table[profile] = _payoff_cell(right[0], n, number)

    expected = Product(spaces).cardinality()
    if not table:
        raise GameSpecError("empty payoff block", spec.payoff_block_line, 1)
    if len(table) != expected:
        raise GameSpecError(f"payoff table has {len(table)} entries, expected {expected}",
                            spec.payoff_block_line, 1)

    utilities = [
        Utility(player=i, arity=1, evaluate=lambda s, i=i: (table[s][i],), label=f"u_{i + 1}")
        for i in range(n)
    ]
    logger.debug(f"parsed finite-matrix game with {n} players and {expected} profiles")
    return Game(spaces=spaces, utilities=utilities, kind='finite-matrix',
                metadata={'profiles': expected})


def _space_line(i: int, space: Lattice) -> str:
    if isinstance(space, IntChain):
        return f"strategies {i + 1} int {space.lo} {space.hi}"
    if isinstance(space, RationalGrid):
        return (f"strategies {i + 1} grid {format_rational(space.lo)} "
                f"{format_rational(space.hi)} {format_rational(space.step)}")
    raise ContractViolation(f"cannot serialize strategy space {space!r}")


def serialize_game(G: Game) -> str:
    """Write a finite game with scalar payoffs in the game file format."""
    if any(u.arity != 1 for u in G.utilities):
        raise ContractViolation("only scalar payoffs can be written as a payoff table")
    lines = ['game finite-matrix', f"players {G.players}"]
    lines.extend(_space_line(i, space) for i, space in enumerate(G.spaces))
    lines.append('payoffs')

    def cell(profile):
        return ','.join(format_rational(G.payoff(i, profile)[0]) for i in range(G.players))

    if G.players == 2:
        for x in G.spaces[0].enumerate():
            lines.append(' '.join(cell((x, y)) for y in G.spaces[1].enumerate()))
    else:
        for profile in G.profile_space.enumerate():
            strategies = ' '.join(format_rational(v) for v in profile)
            lines.append(f"entry {strategies} : {cell(profile)}")
    lines.append('end')
    return '\n'.join(lines) + '\n'


@dataclass
class ParsedAbstraction:
    """Either one connection per player or a single connection on the profile lattice."""

    gcs: Optional[Tuple[GaloisConnection, ...]] = None
    product: Optional[GaloisConnection] = None

    @property
    def is_product(self) -> bool:
        return self.product is not None

    def connection(self) -> GaloisConnection:
        return self.product if self.product is not None else compose_product(self.gcs)


_PLAYER_LINE = re.compile(r'^\s*player\s*(\d+)\s*:(.*)$')
_PRODUCT_LINE = re.compile(r'^\s*product\s*:(.*)$')
_TUPLE = re.compile(r'\(([^()]*)\)')


def _parse_element(text: str, space: Lattice, line: int, column: int) -> Elem:
    try:
        if text.startswith('('):
            if not isinstance(space, Product):
                raise LatticeError(f"{text} is a tuple but {space!r} is scalar")
            parts = text.strip('()').split(',')
            if len(parts) != space.arity:
                raise LatticeError(f"{text} needs {space.arity} coordinates")
            return tuple(c.coerce(p.strip()) for c, p in zip(space.components, parts))
        return space.coerce(text)
    except LatticeError as e:
        raise GameSpecError(str(e), line, column)


def _ceil_digits(tokens: List[Token], line: int) -> int:
    _expect(tokens, 2, line, 'ceil <digits>')
    return _integer(tokens[1], line)


def _player_connection(G: Game, i: int, body: str, line: int, offset: int) -> GaloisConnection:
    space = G.spaces[i]
    tokens = [(t, c + offset) for t, c in _tokens(body)]
    if not tokens:
        raise GameSpecError(f"player {i + 1} has no abstraction members", line, offset)
    if tokens[0][0] == 'ceil':
        return ceil_abstraction(_ceil_digits(tokens, line), space, label=f"player{i + 1}")
    if tokens[0][0] == 'identity':
        return identity_gc(space, label=f"player{i + 1}")
    members = [_parse_element(t, space, line, c) for t, c in tokens]
    return gc_from_subset(space, members, label=f"player{i + 1}")


def parse_abstraction(text: str, G: Game) -> ParsedAbstraction:
    """
    Read an abstraction file against the strategy spaces of ``G``.

    Lines are ``player<i>: <members>``, ``player<i>: ceil <N>``,
    ``player<i>: identity``, a global ``ceil <N>``, or a single
    ``product: (x,y)(x',y')...`` line for a relational abstraction.
    """
    per_player: Dict[int, GaloisConnection] = {}
    product: Optional[GaloisConnection] = None
    global_ceil: Optional[int] = None
    numbered = _lines(text)
    if not numbered:
        raise GameSpecError("empty abstraction file", 1, 1)
    first_line = numbered[0][0]

    for number, line in numbered:
        match = _PLAYER_LINE.match(line)
        if match:
            index = _player_index((match.group(1), match.start(1) + 1), G.players, number)
            if index in per_player:
                raise GameSpecError(f"player {index + 1} is abstracted twice", number, 1)
            per_player[index] = _player_connection(G, index, match.group(2), number, match.start(2))
            continue

        match = _PRODUCT_LINE.match(line)
        if match:
            if product is not None:
                raise GameSpecError("only one product line is allowed", number, 1)
            body = match.group(1)
            members = [
                _parse_element(f"({m.group(1)})", G.profile_space, number, match.start(1) + m.start() + 1)
                for m in _TUPLE.finditer(body)
            ]
            if not members:
                raise GameSpecError("product line lists no profiles", number, match.start(1) + 1)
            product = gc_from_subset(G.profile_space, members, label='product')
            continue

        tokens = _tokens(line)
        if tokens[0][0] == 'ceil':
            global_ceil = _ceil_digits(tokens, number)
            continue
        raise GameSpecError(f"unknown abstraction directive {tokens[0][0]!r}", number, tokens[0][1])

    if product is not None:
        if per_player or global_ceil is not None:
            raise GameSpecError("a product abstraction cannot be mixed with per-player lines", first_line, 1)
        return ParsedAbstraction(product=product)

    if global_ceil is not None:
        for i, space in enumerate(G.spaces):
            per_player.setdefault(i, ceil_abstraction(global_ceil, space, label=f"cl_{global_ceil}"))

    missing = [i + 1 for i in range(G.players) if i not in per_player]
    if missing:
        raise GameSpecError(f"no abstraction given for players {missing}", first_line, 1)
    return ParsedAbstraction(gcs=tuple(per_player[i] for i in range(G.players)))
