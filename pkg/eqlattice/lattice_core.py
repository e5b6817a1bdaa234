"""
Complete lattices used as strategy spaces.

Supported kinds are integer chains, rational grids, rational intervals,
finite products and sub-lattices of any of those. Scalar elements are ``int``
or ``fractions.Fraction``; an element of a product is a tuple holding one
element per component, so products nest.
"""
import itertools
import logging
import math
from fractions import Fraction
from functools import cached_property, reduce
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Tuple

from eqlattice.exceptions import (
    ConstructionError,
    ContractViolation,
    LatticeError,
    UnsupportedOperation,
)

logger = logging.getLogger('eqlattice')

Elem = Any


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or literal such as ``'1.10'`` or ``'3/2'`` to a Fraction."""
    if isinstance(value, bool):
        raise LatticeError(f"not a rational number: {value!r}")
    if isinstance(value, float):
        raise LatticeError(f"floats are not exact, pass a string or Fraction instead: {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise LatticeError(f"not a rational number: {value!r}") from e


class Lattice:
    """
    Base class for finite or grid-discretized complete lattices.

    Subclasses provide ``leq``, binary ``meet2``/``join2``, ``bot``, ``top``,
    ``contains`` and, when finite, the sorted ``elements`` tuple.
    """

    is_chain = False

    @property
    def is_finite(self) -> bool:
        return True

    def _key(self) -> Tuple:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._key()))

    def leq(self, x: Elem, y: Elem) -> bool:
        raise NotImplementedError

    def lt(self, x: Elem, y: Elem) -> bool:
        return x != y and self.leq(x, y)

    def meet2(self, x: Elem, y: Elem) -> Elem:
        raise NotImplementedError

    def join2(self, x: Elem, y: Elem) -> Elem:
        raise NotImplementedError

    def meet(self, xs: Iterable[Elem]) -> Elem:
        """Greatest lower bound of a nonempty set."""
        items = list(xs)
        if not items:
            raise ContractViolation("meet of an empty set")
        return reduce(self.meet2, items)

    def join(self, xs: Iterable[Elem]) -> Elem:
        """Least upper bound of a nonempty set."""
        items = list(xs)
        if not items:
            raise ContractViolation("join of an empty set")
        return reduce(self.join2, items)

    @property
    def bot(self) -> Elem:
        raise NotImplementedError

    @property
    def top(self) -> Elem:
        raise NotImplementedError

    def contains(self, x: Elem) -> bool:
        raise NotImplementedError

    def coerce(self, value) -> Elem:
        """Turn a parsed literal into an element of this lattice."""
        raise UnsupportedOperation(f"{self!r} has no scalar literal form")

    @cached_property
    def elements(self) -> Tuple:
        return tuple(self._generate())

    def _generate(self) -> Iterator[Elem]:
        raise UnsupportedOperation(f"{self!r} is infinite and cannot be enumerated")

    def enumerate(self) -> List[Elem]:
        """Every element exactly once, in lexicographic coordinate order."""
        if not self.is_finite:
            raise UnsupportedOperation(f"{self!r} is infinite and cannot be enumerated")
        return list(self.elements)

    def cardinality(self) -> int:
        if not self.is_finite:
            raise UnsupportedOperation(f"{self!r} is infinite")
        return len(self.elements)

    def covers(self) -> List[Tuple[Elem, Elem]]:
        """Covering pairs (x, y): x < y with nothing strictly in between."""
        elements = self.enumerate()
        pairs = []
        for x in elements:
            above = [y for y in elements if self.lt(x, y)]
            for y in above:
                if not any(self.lt(z, y) for z in above if z != y):
                    pairs.append((x, y))
        return pairs

    def require(self, x: Elem) -> Elem:
        if not self.contains(x):
            raise LatticeError(f"{x!r} is not an element of {self!r}")
        return x


class _Chain(Lattice):
    """Totally ordered scalar lattice."""

    is_chain = True

    def _check(self, *xs):
        for x in xs:
            if isinstance(x, tuple):
                raise LatticeError(f"dimension mismatch: {self!r} has scalar elements, got {x!r}")

    def leq(self, x, y) -> bool:
        self._check(x, y)
        return x <= y

    def meet2(self, x, y):
        self._check(x, y)
        return x if x <= y else y

    def join2(self, x, y):
        self._check(x, y)
        return y if x <= y else x

    def covers(self) -> List[Tuple[Elem, Elem]]:
        elements = self.enumerate()
        return list(zip(elements, elements[1:]))


class IntChain(_Chain):
    """The integers lo..hi."""

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise ConstructionError(f"IntChain bounds out of order: {lo} > {hi}")
        self.lo = int(lo)
        self.hi = int(hi)

    def __repr__(self):
        return f"IntChain({self.lo}, {self.hi})"

    def _key(self):
        return (self.lo, self.hi)

    @property
    def bot(self):
        return self.lo

    @property
    def top(self):
        return self.hi

    def contains(self, x) -> bool:
        if isinstance(x, (tuple, bool)) or not isinstance(x, (int, Fraction)):
            return False
        return Fraction(x).denominator == 1 and self.lo <= x <= self.hi

    def coerce(self, value):
        q = to_rational(value)
        if q.denominator != 1:
            raise LatticeError(f"{value!r} is not an integer strategy")
        return self.require(int(q))

    def _generate(self):
        return iter(range(self.lo, self.hi + 1))


class RationalGrid(_Chain):
    """
    The rationals lo, lo+step, ..., hi.

    Elements are stored as integer offsets over the step, so the grid never
    holds anything but exact multiples of it.
    """

    def __init__(self, lo, hi, step):
        self.lo = to_rational(lo)
        self.hi = to_rational(hi)
        self.step = to_rational(step)
        if self.step <= 0:
            raise ConstructionError(f"grid step must be positive, got {self.step}")
        if self.lo > self.hi:
            raise ConstructionError(f"grid bounds out of order: {self.lo} > {self.hi}")
        span = (self.hi - self.lo) / self.step
        if span.denominator != 1:
            raise ConstructionError(
                f"grid step {self.step} does not divide the range [{self.lo}, {self.hi}]"
            )
        self.count = int(span)

    def __repr__(self):
        return f"RationalGrid({self.lo}, {self.hi}, {self.step})"

    def _key(self):
        return (self.lo, self.hi, self.step)

    @property
    def bot(self):
        return self.lo

    @property
    def top(self):
        return self.hi

    def index_of(self, x) -> int:
        offset = (Fraction(x) - self.lo) / self.step
        if offset.denominator != 1 or not 0 <= offset <= self.count:
            raise LatticeError(f"{x!r} is not a point of {self!r}")
        return int(offset)

    def at(self, index: int) -> Fraction:
        if not 0 <= index <= self.count:
            raise LatticeError(f"grid index {index} out of range 0..{self.count}")
        return self.lo + index * self.step

    def contains(self, x) -> bool:
        if isinstance(x, (tuple, bool)) or not isinstance(x, (int, Fraction)):
            return False
        offset = (Fraction(x) - self.lo) / self.step
        return offset.denominator == 1 and 0 <= offset <= self.count

    def coerce(self, value):
        return self.require(to_rational(value))

    def _generate(self):
        return (self.at(k) for k in range(self.count + 1))


class RationalInterval(_Chain):
    """All rationals in [lo, hi]. Complete as far as iteration needs, never enumerable."""

    def __init__(self, lo, hi):
        self.lo = to_rational(lo)
        self.hi = to_rational(hi)
        if self.lo > self.hi:
            raise ConstructionError(f"interval bounds out of order: {self.lo} > {self.hi}")

    def __repr__(self):
        return f"RationalInterval({self.lo}, {self.hi})"

    def _key(self):
        return (self.lo, self.hi)

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def bot(self):
        return self.lo

    @property
    def top(self):
        return self.hi

    def contains(self, x) -> bool:
        if isinstance(x, (tuple, bool)) or not isinstance(x, (int, Fraction)):
            return False
        return self.lo <= x <= self.hi

    def coerce(self, value):
        return self.require(to_rational(value))

    def covers(self):
        raise UnsupportedOperation(f"{self!r} is dense and has no covering pairs")


class Product(Lattice):
    """Finite product with the componentwise order. ``Product([])`` has the single element ``()``."""

    def __init__(self, components: Sequence[Lattice]):
        self.components = tuple(components)

    def __repr__(self):
        return f"Product({list(self.components)!r})"

    def _key(self):
        return self.components

    @property
    def arity(self) -> int:
        return len(self.components)

    @property
    def is_finite(self) -> bool:
        return all(c.is_finite for c in self.components)

    @property
    def is_chain(self) -> bool:
        return self.arity == 1 and self.components[0].is_chain

    def _check(self, x):
        if not isinstance(x, tuple) or len(x) != self.arity:
            raise LatticeError(f"dimension mismatch: expected a {self.arity}-tuple, got {x!r}")

    def check_index(self, i: int):
        if not 0 <= i < self.arity:
            raise LatticeError(f"component index {i} out of range 0..{self.arity - 1}")

    def leq(self, x, y) -> bool:
        self._check(x)
        self._check(y)
        return all(c.leq(a, b) for c, a, b in zip(self.components, x, y))

    def meet2(self, x, y):
        self._check(x)
        self._check(y)
        return tuple(c.meet2(a, b) for c, a, b in zip(self.components, x, y))

    def join2(self, x, y):
        self._check(x)
        self._check(y)
        return tuple(c.join2(a, b) for c, a, b in zip(self.components, x, y))

    @property
    def bot(self):
        return tuple(c.bot for c in self.components)

    @property
    def top(self):
        return tuple(c.top for c in self.components)

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.arity
            and all(c.contains(a) for c, a in zip(self.components, x))
        )

    def cardinality(self) -> int:
        return math.prod(c.cardinality() for c in self.components)

    def _generate(self):
        if not self.is_finite:
            raise UnsupportedOperation(f"{self!r} is infinite and cannot be enumerated")
        return itertools.product(*(c.enumerate() for c in self.components))

    def covers(self) -> List[Tuple[Elem, Elem]]:
        # a product cover moves exactly one coordinate by one cover step
        steps: List[Dict[Elem, List[Elem]]] = []
        for component in self.components:
            upper: Dict[Elem, List[Elem]] = {}
            for low, high in component.covers():
                upper.setdefault(low, []).append(high)
            steps.append(upper)
        pairs = []
        for x in self.enumerate():
            for i, upper in enumerate(steps):
                for high in upper.get(x[i], ()):
                    pairs.append((x, x[:i] + (high,) + x[i + 1:]))
        return pairs

    def drop(self, s, i: int):
        """Project a profile onto S_{-i}. With two components the result is the bare other element."""
        self._check(s)
        self.check_index(i)
        rest = s[:i] + s[i + 1:]
        return rest[0] if self.arity == 2 else rest

    def splice(self, rest, i: int, x):
        """Inverse of ``drop``: reinsert ``x`` at position ``i``."""
        self.check_index(i)
        parts = (rest,) if self.arity == 2 else tuple(rest)
        if len(parts) != self.arity - 1:
            raise LatticeError(
                f"dimension mismatch: expected {self.arity - 1} opponent coordinates, got {rest!r}"
            )
        return parts[:i] + (x,) + parts[i:]

    def project_minus_i(self, i: int) -> Lattice:
        self.check_index(i)
        rest = self.components[:i] + self.components[i + 1:]
        return rest[0] if self.arity == 2 else Product(rest)


class Subset(Lattice):
    """
    Sub-lattice of a parent lattice given by a finite member set.

    With ``require_join_closed`` (the default) the members must be meet- and
    join-closed in the parent, so meets and joins agree with the parent's.
    Otherwise the members form a Moore family: meet-closed and holding the
    parent's top, and a join is the least member above the parent join.
    """

    def __init__(self, parent: Lattice, members: Iterable[Elem], require_join_closed: bool = True):
        self.parent = parent
        self.members = frozenset(members)
        self.require_join_closed = require_join_closed
        if not self.members:
            raise ConstructionError("a subset lattice needs at least one member")
        for m in sorted(self.members):
            if not parent.contains(m):
                raise ConstructionError(f"{m!r} is not an element of {parent!r}", witness=m)
        if not parent.is_chain:
            ordered = sorted(self.members)
            for a, b in itertools.combinations(ordered, 2):
                low = parent.meet2(a, b)
                if low not in self.members:
                    raise ConstructionError(
                        f"members are not meet-closed: {a!r} meet {b!r} = {low!r} is missing",
                        witness=(a, b),
                    )
                if require_join_closed:
                    high = parent.join2(a, b)
                    if high not in self.members:
                        raise ConstructionError(
                            f"members are not join-closed: {a!r} join {b!r} = {high!r} is missing",
                            witness=(a, b),
                        )
        if not require_join_closed and parent.top not in self.members:
            raise ConstructionError(
                f"a Moore family must contain the top element {parent.top!r}", witness=parent.top
            )

    def __repr__(self):
        return f"Subset({self.parent!r}, {sorted(self.members)!r})"

    def _key(self):
        return (self.parent, self.members)

    @property
    def is_chain(self) -> bool:
        return self.parent.is_chain

    def leq(self, x, y) -> bool:
        return self.parent.leq(x, y)

    def meet2(self, x, y):
        return self.parent.meet2(x, y)

    def join2(self, x, y):
        high = self.parent.join2(x, y)
        if high in self.members:
            return high
        return self.parent.meet(m for m in self.members if self.parent.leq(high, m))

    @cached_property
    def bot(self):
        return self.parent.meet(self.members)

    @cached_property
    def top(self):
        return self.join(self.members)

    def contains(self, x) -> bool:
        try:
            return x in self.members
        except TypeError:
            return False

    def coerce(self, value):
        return self.require(self.parent.coerce(value))

    def _generate(self):
        return iter(sorted(self.members))

    def covers(self) -> List[Tuple[Elem, Elem]]:
        if self.is_chain:
            elements = self.enumerate()
            return list(zip(elements, elements[1:]))
        return super().covers()


def leq(L: Lattice, x: Elem, y: Elem) -> bool:
    return L.leq(x, y)


def meet(L: Lattice, xs: Iterable[Elem]) -> Elem:
    return L.meet(xs)


def join(L: Lattice, xs: Iterable[Elem]) -> Elem:
    return L.join(xs)


def enumerate_elements(L: Lattice) -> List[Elem]:
    return L.enumerate()


def covers(L: Lattice) -> List[Tuple[Elem, Elem]]:
    return L.covers()


def project_minus_i(L: Product, i: int) -> Lattice:
    return L.project_minus_i(i)


def splice(L: Product, rest: Elem, i: int, x: Elem) -> Elem:
    return L.splice(rest, i, x)


def flatten(x: Elem) -> List:
    """Scalar coordinates of a (possibly nested) element, left to right."""
    if isinstance(x, tuple):
        return [scalar for part in x for scalar in flatten(part)]
    return [x]
