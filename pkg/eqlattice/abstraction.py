"""
Galois connections between strategy lattices and their abstractions.

Every abstraction is materialized as a sub-lattice of the concrete lattice
with gamma the identity embedding, so validation and enumeration stay
exhaustive.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence

from eqlattice.exceptions import ConstructionError, ContractViolation, UnsupportedOperation
from eqlattice.lattice_core import (
    Elem,
    Lattice,
    Product,
    RationalGrid,
    RationalInterval,
    Subset,
)

logger = logging.getLogger('eqlattice')


def _identity(x):
    return x


@dataclass(frozen=True, eq=False)
class GaloisConnection:
    """
    Abstraction/concretization pair (alpha, C, A, gamma).

    Flags are computed at construction; ``validate_gc`` recomputes them
    exhaustively on finite lattices.
    """

    concrete: Lattice
    abstract: Lattice
    alpha: Callable[[Elem], Elem]
    gamma: Callable[[Elem], Elem]
    is_insertion: bool = True
    finitely_disjunctive: bool = False
    disjunctive: bool = False
    principal_filter: bool = False
    label: str = ''

    def rho(self, c: Elem) -> Elem:
        """The closure gamma(alpha(c))."""
        return self.gamma(self.alpha(c))

    @property
    def image(self) -> FrozenSet:
        return frozenset(self.gamma(a) for a in self.abstract.enumerate())


@dataclass(frozen=True, eq=False)
class ClosureOperator:
    domain: Lattice
    map: Callable[[Elem], Elem]

    def __call__(self, x: Elem) -> Elem:
        return self.map(x)

    def check_laws(self) -> Dict[str, bool]:
        """Monotone, extensive and idempotent, checked over the whole (finite) domain."""
        elements = self.domain.enumerate()
        return {
            'monotone': all(self.domain.leq(self.map(x), self.map(y)) for x, y in self.domain.covers()),
            'extensive': all(self.domain.leq(x, self.map(x)) for x in elements),
            'idempotent': all(self.map(self.map(x)) == self.map(x) for x in elements),
        }


def closure_operator(gc: GaloisConnection) -> ClosureOperator:
    return ClosureOperator(domain=gc.concrete, map=gc.rho)


def _join_closed(C: Lattice, members: FrozenSet) -> bool:
    if C.is_chain:
        return True
    return all(C.join2(a, b) in members for a, b in itertools.combinations(sorted(members), 2))


def _is_principal_filter(C: Lattice, A: Lattice) -> bool:
    if not C.is_finite:
        # a finite member set is an up-set of a dense chain only when it is {top}
        return A == C or A.bot == C.top
    bottom = A.bot
    return frozenset(A.enumerate()) == frozenset(c for c in C.enumerate() if C.leq(bottom, c))


def _subset_connection(C: Lattice, members: FrozenSet, alpha: Optional[Callable] = None,
                       label: str = '') -> GaloisConnection:
    A = Subset(C, members, require_join_closed=False)
    ordered = A.enumerate()

    @lru_cache(maxsize=None)
    def least_member_above(c):
        C.require(c)
        return C.meet(m for m in ordered if C.leq(c, m))

    disjunctive = _join_closed(C, A.members)
    return GaloisConnection(
        concrete=C,
        abstract=A,
        alpha=alpha or least_member_above,
        gamma=_identity,
        is_insertion=True,
        finitely_disjunctive=disjunctive,
        disjunctive=disjunctive,
        principal_filter=_is_principal_filter(C, A),
        label=label,
    )


def gc_from_subset(C: Lattice, members: Iterable[Elem], label: str = '') -> GaloisConnection:
    """
    Galois connection induced by a meet-closed member set holding the top.

    alpha(c) is the meet of the members above c; gamma embeds.
    """
    member_set = frozenset(members)
    if not member_set:
        raise ConstructionError("an abstraction needs at least one member")
    for m in sorted(member_set):
        if not C.contains(m):
            raise ConstructionError(f"{m!r} is not an element of {C!r}", witness=m)
    if C.top not in member_set:
        raise ConstructionError(f"abstraction misses the top element {C.top!r}", witness=C.top)
    gc = _subset_connection(C, member_set, label=label)
    if not gc.finitely_disjunctive:
        logger.info(f"abstraction {label or sorted(member_set)!r} is not join-closed")
    return gc


def identity_gc(L: Lattice, label: str = 'identity') -> GaloisConnection:
    return GaloisConnection(
        concrete=L,
        abstract=L,
        alpha=_identity,
        gamma=_identity,
        is_insertion=True,
        finitely_disjunctive=True,
        disjunctive=True,
        principal_filter=True,
        label=label,
    )


def compose_product(gcs: Sequence[GaloisConnection], label: str = '') -> GaloisConnection:
    """Componentwise connection on the product of the concrete and abstract lattices."""
    parts = tuple(gcs)
    if not parts:
        raise ContractViolation("compose_product needs at least one connection")
    concrete = Product([g.concrete for g in parts])
    abstract = Product([g.abstract for g in parts])

    def alpha(c):
        concrete.require(c)
        return tuple(g.alpha(x) for g, x in zip(parts, c))

    def gamma(a):
        abstract.require(a)
        return tuple(g.gamma(x) for g, x in zip(parts, a))

    return GaloisConnection(
        concrete=concrete,
        abstract=abstract,
        alpha=alpha,
        gamma=gamma,
        is_insertion=all(g.is_insertion for g in parts),
        finitely_disjunctive=all(g.finitely_disjunctive for g in parts),
        disjunctive=all(g.disjunctive for g in parts),
        principal_filter=all(g.principal_filter for g in parts),
        label=label or ' x '.join(g.label or '?' for g in parts),
    )


def decompose_product(gc: GaloisConnection) -> List[GaloisConnection]:
    """
    Per-component connections of an abstraction of a product.

    A_i collects the i-th coordinates of the concretized abstract elements and
    alpha_i(c_i) is the i-th coordinate of rho(c_i, bottom elsewhere).
    """
    C = gc.concrete
    if not isinstance(C, Product):
        raise ContractViolation(f"decompose_product needs a product lattice, got {C!r}")
    if not gc.abstract.is_finite:
        raise UnsupportedOperation("decompose_product needs a finite abstract lattice")
    image = [gc.gamma(a) for a in gc.abstract.enumerate()]
    bottom = C.bot
    components = []
    for i, C_i in enumerate(C.components):
        members = frozenset(c[i] for c in image)

        def alpha_i(c_i, i=i):
            return gc.rho(bottom[:i] + (c_i,) + bottom[i + 1:])[i]

        components.append(_subset_connection(C_i, members, alpha=alpha_i,
                                             label=f"{gc.label or 'A'}_{i + 1}"))
    return components


def _product_image(gc: GaloisConnection) -> FrozenSet:
    parts = [sorted(g.image) for g in decompose_product(gc)]
    return frozenset(itertools.product(*parts))


def is_relational(gc: GaloisConnection) -> bool:
    """True when the abstraction is not the product of its component abstractions."""
    if not isinstance(gc.concrete, Product):
        return False
    return _product_image(gc) != gc.image


def relational_witness(gc: GaloisConnection) -> Optional[Elem]:
    """Least (lexicographic) element of the component product missing from the abstraction."""
    if not isinstance(gc.concrete, Product):
        return None
    missing = sorted(_product_image(gc) - gc.image)
    return missing[0] if missing else None


def is_principal_filter(gc: GaloisConnection) -> bool:
    """gamma(A) equals the up-set of gamma(bottom of A)."""
    if not gc.concrete.is_finite:
        return gc.principal_filter
    return _is_principal_filter(gc.concrete, gc.abstract)


def ceil_abstraction(N: int, lattice: Lattice, label: str = '') -> GaloisConnection:
    """
    Ceiling to N fractional digits, cl_N(x) = ceil(10^N x) / 10^N.

    Works on a rational interval (abstract lattice: the 10^-N grid), on a
    finite rational chain whose points cl_N maps back onto itself, and
    componentwise on products of those.
    """
    if N < 0:
        raise ConstructionError(f"number of digits must be nonnegative, got {N}")
    label = label or f"cl_{N}"
    if isinstance(lattice, Product):
        return compose_product([ceil_abstraction(N, c, label) for c in lattice.components], label=label)

    scale = 10 ** N

    def cl(x):
        return Fraction(math.ceil(Fraction(x) * scale), scale)

    if isinstance(lattice, RationalInterval):
        if cl(lattice.hi) != lattice.hi:
            raise ConstructionError(
                f"{label} maps the top {lattice.hi} outside {lattice!r}", witness=lattice.hi)
        abstract = RationalGrid(cl(lattice.lo), lattice.hi, Fraction(1, scale))

        def alpha(x):
            return cl(lattice.require(x))

        return GaloisConnection(
            concrete=lattice,
            abstract=abstract,
            alpha=alpha,
            gamma=_identity,
            is_insertion=True,
            finitely_disjunctive=True,
            disjunctive=True,
            principal_filter=abstract.bot == lattice.top,
            label=label,
        )

    if not (lattice.is_chain and lattice.is_finite):
        raise ConstructionError(f"{label} needs a rational chain, got {lattice!r}")
    for x in lattice.enumerate():
        if not lattice.contains(cl(x)):
            raise ConstructionError(
                f"{label} maps {x} to {cl(x)}, which is not a point of {lattice!r}", witness=x)
    return gc_from_subset(lattice, {cl(x) for x in lattice.enumerate()}, label=label)


def alpha_s(gc: GaloisConnection, X: Iterable[Elem]) -> FrozenSet:
    return frozenset(gc.alpha(x) for x in X)


def gamma_s(gc: GaloisConnection, Y: Iterable[Elem]) -> FrozenSet:
    return frozenset(gc.gamma(y) for y in Y)


@dataclass
class LawFailure:
    law: str
    witness: tuple
    detail: str = ''


@dataclass
class GaloisValidation:
    laws: Dict[str, bool]
    flags: Dict[str, bool]
    failures: List[LawFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.laws.values())


def validate_gc(gc: GaloisConnection) -> GaloisValidation:
    """
    Exhaustively verify the adjunction, additivity of alpha, co-additivity of
    gamma and the closure laws of gamma . alpha, and recompute every flag.
    """
    C, A = gc.concrete, gc.abstract
    if not (C.is_finite and A.is_finite):
        raise UnsupportedOperation("validate_gc needs finite concrete and abstract lattices")

    concrete = C.enumerate()
    abstract = A.enumerate()
    failures: List[LawFailure] = []
    laws: Dict[str, bool] = {}

    def record(law: str, witness: Optional[tuple], detail: str = ''):
        laws[law] = witness is None
        if witness is not None:
            failures.append(LawFailure(law, witness, detail))

    alpha = {c: gc.alpha(c) for c in concrete}
    gamma = {a: gc.gamma(a) for a in abstract}

    record('alpha_total', next(((c,) for c in concrete if not A.contains(alpha[c])), None),
           'alpha leaves the abstract lattice')
    record('gamma_total', next(((a,) for a in abstract if not C.contains(gamma[a])), None),
           'gamma leaves the concrete lattice')
    if not (laws['alpha_total'] and laws['gamma_total']):
        return GaloisValidation(laws=laws, flags={}, failures=failures)

    record('adjunction', next(
        ((c, a) for c in concrete for a in abstract
         if A.leq(alpha[c], a) != C.leq(c, gamma[a])), None),
        'alpha(c) <= a and c <= gamma(a) disagree')

    additive = None if alpha[C.bot] == A.bot else (C.bot,)
    if additive is None:
        additive = next(
            ((c1, c2) for c1, c2 in itertools.combinations(concrete, 2)
             if alpha[C.join2(c1, c2)] != A.join2(alpha[c1], alpha[c2])), None)
    record('alpha_additive', additive, 'alpha does not preserve joins')

    coadditive = None if gamma[A.top] == C.top else (A.top,)
    if coadditive is None:
        coadditive = next(
            ((a1, a2) for a1, a2 in itertools.combinations(abstract, 2)
             if gamma[A.meet2(a1, a2)] != C.meet2(gamma[a1], gamma[a2])), None)
    record('gamma_coadditive', coadditive, 'gamma does not preserve meets')

    rho = {c: gamma[alpha[c]] for c in concrete}
    record('closure_monotone', next(
        ((x, y) for x, y in C.covers() if not C.leq(rho[x], rho[y])), None))
    record('closure_extensive', next(((c,) for c in concrete if not C.leq(c, rho[c])), None))
    record('closure_idempotent', next(
        ((c,) for c in concrete if C.contains(rho[c]) and rho.get(rho[c]) != rho[c]), None))

    join_preserved = all(
        gamma[A.join2(a1, a2)] == C.join2(gamma[a1], gamma[a2])
        for a1, a2 in itertools.combinations(abstract, 2)
    )
    image = frozenset(gamma.values())
    bottom = gamma[A.bot]
    flags = {
        'is_insertion': all(gc.alpha(gamma[a]) == a for a in abstract),
        'finitely_disjunctive': join_preserved,
        'disjunctive': join_preserved,
        'principal_filter': image == frozenset(c for c in concrete if C.leq(bottom, c)),
    }
    for name, value in flags.items():
        if getattr(gc, name) != value:
            logger.warning(f"connection {gc.label!r}: flag {name} recorded as "
                           f"{getattr(gc, name)} but checks as {value}")
    return GaloisValidation(laws=laws, flags=flags, failures=failures)
