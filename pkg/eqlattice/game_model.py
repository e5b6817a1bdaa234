"""
Games, best-response correspondences and exhaustive checkers for
supermodularity, quasisupermodularity, increasing differences, single
crossing and monotonicity.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache, partial
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from eqlattice.exceptions import ContractViolation, NoMaximum, UnsupportedOperation
from eqlattice.lattice_core import Elem, Lattice, Product

logger = logging.getLogger('eqlattice')

Payoff = Tuple[Fraction, ...]


def as_vector(value) -> Tuple:
    return value if isinstance(value, tuple) else (value,)


def vector_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(as_vector(a), as_vector(b)))


def vector_lt(a, b) -> bool:
    return vector_leq(a, b) and as_vector(a) != as_vector(b)


def vector_sub(a, b) -> Tuple:
    return tuple(x - y for x, y in zip(as_vector(a), as_vector(b)))


def vector_add(a, b) -> Tuple:
    return tuple(x + y for x, y in zip(as_vector(a), as_vector(b)))


@dataclass(frozen=True)
class Utility:
    """
    Payoff function of one player.

    Args:
        player: 0-based player index
        arity: number of payoff components N_i
        evaluate: full strategy profile -> tuple of N_i rationals
        component_dependency: payoff component j depends only on own sub-strategy j
        maximizer: optional closed form s_{-i} -> unique best strategy of the player
    """

    player: int
    arity: int
    evaluate: Callable[[Elem], Payoff]
    component_dependency: bool = False
    maximizer: Optional[Callable[[Elem], Elem]] = None
    label: str = ''

    def __call__(self, profile: Elem) -> Payoff:
        return as_vector(self.evaluate(profile))


def scalar_utility(player: int, fn: Callable[[Elem], Fraction], label: str = '') -> Utility:
    return Utility(player=player, arity=1, evaluate=lambda s: (Fraction(fn(s)),), label=label)


@dataclass(frozen=True, eq=False)
class Correspondence:
    """Multivalued map from ``domain`` into finite subsets of ``codomain``."""

    domain: Lattice
    evaluate: Callable[[Elem], FrozenSet]
    codomain: Optional[Lattice] = None
    label: str = ''

    def __post_init__(self):
        if self.codomain is None:
            object.__setattr__(self, 'codomain', self.domain)

    def __call__(self, x: Elem) -> FrozenSet:
        return frozenset(self.evaluate(x))


class Game:
    """
    Strategic game on complete lattices.

    Best responses are memoized per (player, opponents' profile); the cache
    is thread-safe so equilibrium scans may share one game across workers.
    """

    def __init__(self, spaces: Sequence[Lattice], utilities: Sequence[Utility],
                 kind: str = 'custom', metadata: Optional[Dict] = None):
        if not spaces:
            raise ContractViolation("a game needs at least one player")
        if len(spaces) != len(utilities):
            raise ContractViolation(
                f"{len(spaces)} strategy spaces but {len(utilities)} utility functions"
            )
        self.spaces = tuple(spaces)
        self.utilities = tuple(utilities)
        self.kind = kind
        self.metadata = dict(metadata or {})
        self.profile_space = Product(self.spaces)
        self._best_response = lru_cache(maxsize=None)(self._compute_best_response)

    def __repr__(self):
        return f"Game(kind={self.kind!r}, players={self.players})"

    @property
    def players(self) -> int:
        return len(self.spaces)

    def opponents_space(self, i: int) -> Lattice:
        return self.profile_space.project_minus_i(i)

    def payoff(self, i: int, profile: Elem) -> Payoff:
        return self.utilities[i](profile)

    def best_response_i(self, i: int, s_minus_i: Elem) -> FrozenSet:
        self.profile_space.check_index(i)
        return self._best_response(i, s_minus_i)

    def _compute_best_response(self, i: int, s_minus_i: Elem) -> FrozenSet:
        utility = self.utilities[i]
        space = self.spaces[i]
        if utility.maximizer is not None:
            return frozenset({utility.maximizer(s_minus_i)})
        if not space.is_finite:
            raise UnsupportedOperation(
                f"player {i + 1} has an infinite strategy space and no closed-form maximizer"
            )
        if utility.component_dependency:
            return self._componentwise_best_response(i, s_minus_i)

        payoffs = {
            x: utility(self.profile_space.splice(s_minus_i, i, x))
            for x in space.enumerate()
        }
        ceiling = tuple(max(column) for column in zip(*payoffs.values()))
        best = frozenset(x for x, value in payoffs.items() if value == ceiling)
        if not best:
            raise NoMaximum(i, s_minus_i)
        return best

    def _componentwise_best_response(self, i: int, s_minus_i: Elem) -> FrozenSet:
        space = self.spaces[i]
        utility = self.utilities[i]
        if not isinstance(space, Product) or space.arity != utility.arity:
            raise ContractViolation(
                f"player {i + 1}: component dependency needs a product space with {utility.arity} components"
            )
        filler = space.bot
        choices = []
        for j, component in enumerate(space.components):
            scores = {}
            for x in component.enumerate():
                own = filler[:j] + (x,) + filler[j + 1:]
                scores[x] = utility(self.profile_space.splice(s_minus_i, i, own))[j]
            best_score = max(scores.values())
            choices.append([x for x, score in scores.items() if score == best_score])
        return frozenset(itertools.product(*choices))


def best_response_i(G: Game, i: int, s_minus_i: Elem) -> FrozenSet:
    return G.best_response_i(i, s_minus_i)


def best_response(G: Game) -> Correspondence:
    """B(s) = product over players of B_i(s_{-i})."""
    space = G.profile_space

    def evaluate(s):
        return frozenset(itertools.product(
            *(G.best_response_i(i, space.drop(s, i)) for i in range(G.players))
        ))

    return Correspondence(domain=space, evaluate=evaluate, label='B')


def best_response_i_correspondence(G: Game, i: int) -> Correspondence:
    return Correspondence(
        domain=G.opponents_space(i),
        codomain=G.spaces[i],
        evaluate=partial(G.best_response_i, i),
        label=f"B_{i + 1}",
    )


class LatticeProperty(Enum):
    SUPERMODULAR = 'supermodular'
    QUASISUPERMODULAR = 'quasisupermodular'
    INCREASING_DIFFERENCES = 'increasing_differences'
    SINGLE_CROSSING = 'single_crossing'
    MONOTONE = 'monotone'

    @property
    def is_binary(self) -> bool:
        return self in (LatticeProperty.INCREASING_DIFFERENCES, LatticeProperty.SINGLE_CROSSING)


@dataclass
class PropertyWitness:
    """Two comparable (or incomparable) points and both sides of the failed inequality."""

    lower: Elem
    upper: Elem
    left: Tuple
    right: Tuple
    note: str = ''


@dataclass
class PropertyVerdict:
    mode: LatticeProperty
    holds: bool
    pairs_checked: int = 0
    counterexamples: List[PropertyWitness] = field(default_factory=list)

    @property
    def counterexample(self) -> Optional[PropertyWitness]:
        return self.counterexamples[0] if self.counterexamples else None


class _Recorder:
    def __init__(self, mode: LatticeProperty, limit: Optional[int]):
        self.verdict = PropertyVerdict(mode=mode, holds=True)
        self.limit = limit

    @property
    def full(self) -> bool:
        return self.limit is not None and len(self.verdict.counterexamples) >= self.limit

    def fail(self, witness: PropertyWitness):
        self.verdict.holds = False
        if not self.full:
            self.verdict.counterexamples.append(witness)


def check_lattice_property(mode: LatticeProperty, f: Callable, domain: Lattice,
                           other: Optional[Lattice] = None,
                           max_witnesses: Optional[int] = None) -> PropertyVerdict:
    """
    Exhaustively check a lattice property of a scalar or vector-valued function.

    Unary modes (supermodular, quasisupermodular, monotone) take ``f(x)`` on
    ``domain``. Binary modes (increasing differences, single crossing) take
    ``f(x, y)`` with ``x`` in ``domain`` and ``y`` in ``other``.

    Args:
        mode: property to check
        f: the function
        domain: lattice of the first argument
        other: lattice of the second argument for binary modes
        max_witnesses: stop recording counterexamples after this many (None keeps all)

    Returns:
        PropertyVerdict with every recorded counterexample
    """
    if mode.is_binary and other is None:
        raise ContractViolation(f"{mode.value} needs a second lattice")
    for lattice in (domain, other):
        if lattice is not None and not lattice.is_finite:
            raise UnsupportedOperation(f"cannot check {mode.value} exhaustively on {lattice!r}")

    recorder = _Recorder(mode, max_witnesses)
    if mode.is_binary:
        memo: Dict = {}

        def value(x, y):
            if (x, y) not in memo:
                memo[(x, y)] = as_vector(f(x, y))
            return memo[(x, y)]

        if mode is LatticeProperty.INCREASING_DIFFERENCES:
            _increasing_differences(value, domain, other, recorder)
        else:
            _single_crossing(value, domain, other, recorder)
    else:
        memo = {}

        def value(x):
            if x not in memo:
                memo[x] = as_vector(f(x))
            return memo[x]

        if mode is LatticeProperty.SUPERMODULAR:
            _supermodular(value, domain, recorder)
        elif mode is LatticeProperty.QUASISUPERMODULAR:
            _quasisupermodular(value, domain, recorder)
        else:
            _monotone(value, domain, recorder)
    return recorder.verdict


def _increasing_differences(value, X: Lattice, Y: Lattice, recorder: _Recorder):
    # differences telescope along covering chains, so cover steps on both sides suffice
    y_covers = Y.covers()
    for x, x_up in X.covers():
        for y, y_up in y_covers:
            recorder.verdict.pairs_checked += 1
            left = vector_sub(value(x_up, y), value(x, y))
            right = vector_sub(value(x_up, y_up), value(x, y_up))
            if not vector_leq(left, right):
                recorder.fail(PropertyWitness((x, y), (x_up, y_up), left, right,
                                              'difference decreases'))


def _single_crossing(value, X: Lattice, Y: Lattice, recorder: _Recorder):
    y_covers = Y.covers()
    xs = X.enumerate()
    for x, x_up in itertools.permutations(xs, 2):
        if not X.lt(x, x_up):
            continue
        for y, y_up in y_covers:
            recorder.verdict.pairs_checked += 1
            before = (value(x, y), value(x_up, y))
            after = (value(x, y_up), value(x_up, y_up))
            if vector_leq(*before) and not vector_leq(*after):
                recorder.fail(PropertyWitness((x, y), (x_up, y_up), before, after,
                                              'weak crossing lost'))
            elif vector_lt(*before) and not vector_lt(*after):
                recorder.fail(PropertyWitness((x, y), (x_up, y_up), before, after,
                                              'strict crossing lost'))


def _incomparable_pairs(L: Lattice):
    for a, b in itertools.combinations(L.enumerate(), 2):
        if not L.leq(a, b) and not L.leq(b, a):
            yield a, b


def _supermodular(value, L: Lattice, recorder: _Recorder):
    if L.is_chain:
        return
    for a, b in _incomparable_pairs(L):
        recorder.verdict.pairs_checked += 1
        left = vector_add(value(L.join2(a, b)), value(L.meet2(a, b)))
        right = vector_add(value(a), value(b))
        if not vector_leq(right, left):
            recorder.fail(PropertyWitness(a, b, left, right, 'f(a join b) + f(a meet b) < f(a) + f(b)'))


def _quasisupermodular(value, L: Lattice, recorder: _Recorder):
    if L.is_chain:
        return
    for a, b in _incomparable_pairs(L):
        for x, y in ((a, b), (b, a)):
            recorder.verdict.pairs_checked += 1
            low, high = value(L.meet2(x, y)), value(L.join2(x, y))
            if vector_leq(low, value(x)) and not vector_leq(value(y), high):
                recorder.fail(PropertyWitness(x, y, (low, value(x)), (value(y), high),
                                              'weak implication fails'))
            elif vector_lt(low, value(x)) and not vector_lt(value(y), high):
                recorder.fail(PropertyWitness(x, y, (low, value(x)), (value(y), high),
                                              'strict implication fails'))


def _monotone(value, L: Lattice, recorder: _Recorder):
    for x, y in L.covers():
        recorder.verdict.pairs_checked += 1
        if not vector_leq(value(x), value(y)):
            recorder.fail(PropertyWitness(x, y, value(x), value(y), 'f decreases'))


@dataclass
class PlayerSupermodularity:
    player: int
    own_supermodular: PropertyVerdict
    increasing_differences: PropertyVerdict
    own_quasisupermodular: Optional[PropertyVerdict] = None
    single_crossing: Optional[PropertyVerdict] = None

    @property
    def supermodular(self) -> bool:
        return self.own_supermodular.holds and self.increasing_differences.holds

    @property
    def quasisupermodular(self) -> bool:
        if self.supermodular:
            return True
        return bool(
            self.own_quasisupermodular and self.own_quasisupermodular.holds
            and self.single_crossing and self.single_crossing.holds
        )


@dataclass
class SupermodularityReport:
    supermodular: bool
    quasisupermodular: bool
    players: List[PlayerSupermodularity]


def _own_property(mode: LatticeProperty, G: Game, i: int, max_witnesses: int) -> PropertyVerdict:
    """Check ``mode`` of u_i(., s_{-i}) on S_i for every fixed s_{-i}."""
    space = G.profile_space
    combined = PropertyVerdict(mode=mode, holds=True)
    for rest in G.opponents_space(i).enumerate():
        verdict = check_lattice_property(
            mode, lambda x, rest=rest: G.payoff(i, space.splice(rest, i, x)), G.spaces[i],
            max_witnesses=max_witnesses,
        )
        combined.pairs_checked += verdict.pairs_checked
        if not verdict.holds:
            combined.holds = False
            room = max_witnesses - len(combined.counterexamples)
            combined.counterexamples.extend(verdict.counterexamples[:max(room, 0)])
        if G.spaces[i].is_chain:
            # nothing to compare on a chain; one pass establishes it
            break
    return combined


def is_supermodular_game(G: Game, max_witnesses: int = 5) -> SupermodularityReport:
    """
    Check supermodularity of every player's payoff in own strategy and
    increasing differences against the opponents. Quasisupermodularity and
    single crossing are only examined for players that fail the stronger test.
    """
    space = G.profile_space
    if not space.is_finite:
        raise UnsupportedOperation(f"{G!r} has infinite strategy spaces")

    players = []
    for i in range(G.players):
        def payoff_pair(x, rest, i=i):
            return G.payoff(i, space.splice(rest, i, x))

        own = _own_property(LatticeProperty.SUPERMODULAR, G, i, max_witnesses)
        differences = check_lattice_property(
            LatticeProperty.INCREASING_DIFFERENCES, payoff_pair, G.spaces[i], G.opponents_space(i),
            max_witnesses=max_witnesses,
        )
        report = PlayerSupermodularity(i, own, differences)
        if not report.supermodular:
            report.own_quasisupermodular = _own_property(
                LatticeProperty.QUASISUPERMODULAR, G, i, max_witnesses)
            report.single_crossing = check_lattice_property(
                LatticeProperty.SINGLE_CROSSING, payoff_pair, G.spaces[i], G.opponents_space(i),
                max_witnesses=max_witnesses,
            )
        logger.debug(f"player {i + 1}: supermodular={report.supermodular}, "
                     f"quasisupermodular={report.quasisupermodular}")
        players.append(report)

    return SupermodularityReport(
        supermodular=all(p.supermodular for p in players),
        quasisupermodular=all(p.quasisupermodular for p in players),
        players=players,
    )
