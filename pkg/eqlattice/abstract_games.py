"""
Abstract games and correctness checks between concrete and abstract
best responses.

Two schemes are supported. Restricting strategy spaces plays the game on the
abstract lattices A_i with payoffs u_i(gamma(a)). Abstracting best responses
keeps S_i but lets every player see the opponents through rho = gamma . alpha.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Tuple

from eqlattice.abstraction import (
    GaloisConnection,
    alpha_s,
    compose_product,
    gamma_s,
    identity_gc,
)
from eqlattice.exceptions import (
    ContractViolation,
    NonConvergence,
    PreconditionViolation,
)
from eqlattice.fixpoint_solvers import Direction, enumerate_equilibria, lfp_multivalued, rt_solve
from eqlattice.game_model import (
    Correspondence,
    Game,
    Utility,
    best_response,
    best_response_i_correspondence,
)
from eqlattice.lattice_core import Elem, Product
from eqlattice.powerset_orders import SetRelation, extremal_membership, powerset_compare

logger = logging.getLogger('eqlattice')


class Scheme(Enum):
    RESTRICTED_STRATEGY_SPACE = 'restricted'
    ABSTRACT_BEST_RESPONSE = 'abstract-best-response'


@dataclass
class AbstractGame:
    base: Game
    gcs: Tuple[GaloisConnection, ...]
    scheme: Scheme
    derived_game: Game
    warnings: List[str] = field(default_factory=list)

    @property
    def supermodularity_guaranteed(self) -> bool:
        """False when some connection is not finitely disjunctive."""
        return all(g.finitely_disjunctive for g in self.gcs)

    @property
    def profile_connection(self) -> GaloisConnection:
        return compose_product(self.gcs)

    def concretize(self, profile: Elem) -> Elem:
        """Map a derived-game profile into the base game's profile space."""
        if self.scheme is Scheme.ABSTRACT_BEST_RESPONSE:
            return profile
        return tuple(g.gamma(x) for g, x in zip(self.gcs, profile))


def _check_connections(G: Game, gcs: Sequence[GaloisConnection]) -> Tuple[GaloisConnection, ...]:
    gcs = tuple(gcs)
    if len(gcs) != G.players:
        raise ContractViolation(f"{G.players} players but {len(gcs)} abstractions")
    for i, (space, gc) in enumerate(zip(G.spaces, gcs)):
        if gc.concrete != space:
            raise ContractViolation(
                f"player {i + 1}: abstraction of {gc.concrete!r} does not match strategy space {space!r}"
            )
    return gcs


def restrict_game(G: Game, gcs: Sequence[GaloisConnection]) -> AbstractGame:
    """
    Game on the abstract strategy spaces with payoffs u_i(gamma(a)).

    Connections that are not finitely disjunctive still give a well-defined
    game; the result carries a warning instead.
    """
    gcs = _check_connections(G, gcs)
    warnings = []
    for i, gc in enumerate(gcs):
        if not gc.finitely_disjunctive:
            message = (f"player {i + 1}: abstraction {gc.label!r} is not finitely disjunctive, "
                       f"supermodularity of the restricted game is unverified")
            logger.warning(message)
            warnings.append(message)

    def concretize(a):
        return tuple(g.gamma(x) for g, x in zip(gcs, a))

    utilities = [
        Utility(
            player=u.player,
            arity=u.arity,
            evaluate=lambda a, u=u: u.evaluate(concretize(a)),
            component_dependency=u.component_dependency,
            label=f"{u.label}^G",
        )
        for u in G.utilities
    ]
    derived = Game(
        spaces=[g.abstract for g in gcs],
        utilities=utilities,
        kind=f"{G.kind}/restricted",
        metadata={**G.metadata, 'abstractions': [g.label for g in gcs]},
    )
    return AbstractGame(G, gcs, Scheme.RESTRICTED_STRATEGY_SPACE, derived, warnings)


def abstract_best_response_game(G: Game, gcs: Sequence[GaloisConnection]) -> AbstractGame:
    """
    Game on the original spaces where player i's payoff sees rho_{-i}(s_{-i}).

    Closed-form maximizers are carried over by closing the opponents'
    profile before evaluating them, so B_G(s) = B(rho(s)).
    """
    gcs = _check_connections(G, gcs)
    space = G.profile_space

    def close_opponents(s, i):
        return tuple(x if j == i else gcs[j].rho(x) for j, x in enumerate(s))

    def close_rest(rest, i):
        full = space.splice(rest, i, G.spaces[i].bot)
        return space.drop(close_opponents(full, i), i)

    utilities = []
    for u in G.utilities:
        i = u.player
        maximizer = None
        if u.maximizer is not None:
            def maximizer(rest, u=u, i=i):
                return u.maximizer(close_rest(rest, i))
        utilities.append(Utility(
            player=i,
            arity=u.arity,
            evaluate=lambda s, u=u, i=i: u.evaluate(close_opponents(s, i)),
            component_dependency=u.component_dependency,
            maximizer=maximizer,
            label=f"{u.label}_G",
        ))
    derived = Game(
        spaces=G.spaces,
        utilities=utilities,
        kind=f"{G.kind}/abstract-response",
        metadata={**G.metadata, 'abstractions': [g.label for g in gcs]},
    )
    return AbstractGame(G, gcs, Scheme.ABSTRACT_BEST_RESPONSE, derived)


def best_correct_approx(f: Correspondence, gc: GaloisConnection,
                        codomain_gc: Optional[GaloisConnection] = None) -> Correspondence:
    """f^A(a) = alpha^s(f(gamma(a)))."""
    target = codomain_gc or gc

    def evaluate(a):
        return alpha_s(target, f(gc.gamma(a)))

    return Correspondence(domain=gc.abstract, codomain=target.abstract, evaluate=evaluate,
                          label=f"{f.label or 'f'}^A")


@dataclass
class Counterexample:
    element: Elem
    concrete: FrozenSet
    abstract: FrozenSet
    reason: str


@dataclass
class CorrectnessVerdict:
    relation: SetRelation
    holds: bool
    fixed_point_condition: bool = True
    soundness: bool = True
    counterexample: Optional[Counterexample] = None


_FAMILY = {
    SetRelation.SMYTH: 'in_meet_family',
    SetRelation.HOARE: 'in_join_family',
    SetRelation.EGLI_MILNER: 'in_both',
}


def check_correct_approx(f: Correspondence, f_sharp: Correspondence, gc: GaloisConnection,
                         rel: SetRelation,
                         codomain_gc: Optional[GaloisConnection] = None) -> CorrectnessVerdict:
    """
    Check that ``f_sharp`` is a rel-correct approximation of ``f``.

    Fixed-point condition: every image of f_sharp has its extremal element(s)
    and f_sharp is rel-monotone. Soundness: f(gamma(a)) rel gamma^s(f_sharp(a))
    for every abstract a.

    Args:
        f: concrete correspondence
        f_sharp: abstract correspondence on gc.abstract
        gc: connection on the domain side
        rel: Smyth, Hoare or Egli-Milner
        codomain_gc: connection on the image side when it differs from ``gc``
    """
    if rel not in _FAMILY:
        raise ContractViolation(f"correctness is defined for Smyth, Hoare and Egli-Milner, not {rel.value}")
    target = codomain_gc or gc
    A = gc.abstract
    images = {a: f_sharp(a) for a in A.enumerate()}
    verdict = CorrectnessVerdict(relation=rel, holds=True)
    fixed_failure = None

    for a, image in images.items():
        if not image or not getattr(extremal_membership(target.abstract, image), _FAMILY[rel]):
            verdict.fixed_point_condition = False
            fixed_failure = fixed_failure or Counterexample(a, frozenset(), image, 'extremal element missing')
    for a, b in A.covers():
        if not powerset_compare(rel, target.abstract, images[a], images[b]):
            verdict.fixed_point_condition = False
            fixed_failure = fixed_failure or Counterexample((a, b), images[a], images[b], 'not monotone')

    for a, image in images.items():
        concrete = f(gc.gamma(a))
        abstract = gamma_s(target, image)
        if not powerset_compare(rel, target.concrete, concrete, abstract):
            verdict.soundness = False
            verdict.counterexample = Counterexample(a, concrete, abstract, 'unsound')
            break

    verdict.holds = verdict.fixed_point_condition and verdict.soundness
    if verdict.counterexample is None:
        verdict.counterexample = fixed_failure
    logger.info(f"{rel.value}-correctness of {f_sharp.label or 'f#'}: {verdict.holds}")
    return verdict


@dataclass
class CompletenessVerdict:
    holds: bool
    counterexample: Optional[Counterexample] = None
    lfp_agreement: Optional[bool] = None


def check_complete_approx(f: Correspondence, f_sharp: Correspondence, gc: GaloisConnection,
                          codomain_gc: Optional[GaloisConnection] = None) -> CompletenessVerdict:
    """alpha^s(f(c)) = f_sharp(alpha(c)) for every concrete c."""
    target = codomain_gc or gc
    for c in gc.concrete.enumerate():
        left = alpha_s(target, f(c))
        right = f_sharp(gc.alpha(c))
        if left != right:
            return CompletenessVerdict(False, Counterexample(c, left, right, 'incomplete'))

    agreement = None
    if codomain_gc is None:
        try:
            agreement = gc.alpha(lfp_multivalued(f)) == lfp_multivalued(f_sharp)
        except (PreconditionViolation, NonConvergence) as e:
            logger.info(f"skipping least fixed point cross-check: {e}")
        if agreement is False:
            logger.error("complete approximation but alpha(lfp f) differs from lfp f#")
    return CompletenessVerdict(True, None, agreement)


@dataclass
class TheoremWitness:
    element: Elem
    value: Elem


@dataclass
class TheoremVerdict:
    holds: bool
    witnesses: List[TheoremWitness]
    principal_filters: List[bool]

    @property
    def holds_unconditionally(self) -> bool:
        """Every abstraction is a principal filter, so correctness holds unconditionally."""
        return all(self.principal_filters)


def check_theorem_condition(G: Game, gcs: Sequence[GaloisConnection]) -> TheoremVerdict:
    """
    For every abstract profile a, check that
    join B(gamma(a)) joined with gamma(meet B^G(a)) lies in gamma(A).
    """
    game = restrict_game(G, gcs)
    concrete_space = G.profile_space
    abstract_space = game.derived_game.profile_space
    images = [g.image for g in game.gcs]
    concrete_response = best_response(G)
    abstract_response = best_response(game.derived_game)

    witnesses = []
    for a in abstract_space.enumerate():
        upper = concrete_space.join(concrete_response(game.concretize(a)))
        lower = game.concretize(abstract_space.meet(abstract_response(a)))
        value = concrete_space.join2(upper, lower)
        if not all(x in image for x, image in zip(value, images)):
            witnesses.append(TheoremWitness(a, value))

    verdict = TheoremVerdict(
        holds=not witnesses,
        witnesses=witnesses,
        principal_filters=[g.principal_filter for g in game.gcs],
    )
    logger.info(f"correctness condition over {abstract_space.cardinality()} abstract profiles: "
                f"{verdict.holds} ({len(witnesses)} witnesses)")
    return verdict


def player_correctness(game: AbstractGame, i: int, rel: SetRelation) -> CorrectnessVerdict:
    """Correctness of the restricted best response B_i^G against B_i."""
    if game.scheme is not Scheme.RESTRICTED_STRATEGY_SPACE:
        raise ContractViolation("per-player correctness compares restricted best responses")
    others = [g for j, g in enumerate(game.gcs) if j != i]
    if not others:
        domain_gc = identity_gc(Product([]))
    elif len(others) == 1:
        domain_gc = others[0]
    else:
        domain_gc = compose_product(others)
    return check_correct_approx(
        best_response_i_correspondence(game.base, i),
        best_response_i_correspondence(game.derived_game, i),
        domain_gc,
        rel,
        codomain_gc=game.gcs[i],
    )


@dataclass
class DominanceVerdict:
    holds: bool
    method: str
    concrete: List[Elem]
    abstract: List[Elem]


def equilibrium_dominance(game: AbstractGame, concrete_extremes: Optional[Tuple[Elem, Elem]] = None,
                          max_workers: int = 4) -> DominanceVerdict:
    """
    Egli-Milner dominance of the concrete equilibria by the (concretized)
    abstract ones. When either game is infinite only the least and greatest
    equilibria are compared.
    """
    base, derived = game.base, game.derived_game
    space = base.profile_space
    if concrete_extremes is None and space.is_finite and derived.profile_space.is_finite:
        concrete = enumerate_equilibria(base, max_workers=max_workers)
        abstract = frozenset(game.concretize(a) for a in enumerate_equilibria(derived, max_workers=max_workers))
        holds = powerset_compare(SetRelation.EGLI_MILNER, space, concrete, abstract)
        return DominanceVerdict(holds, 'equilibria', sorted(concrete), sorted(abstract))

    if concrete_extremes is None:
        concrete_extremes = (rt_solve(base, Direction.LFP).result, rt_solve(base, Direction.GFP).result)
    low, high = concrete_extremes
    abstract_low = game.concretize(rt_solve(derived, Direction.LFP).result)
    abstract_high = game.concretize(rt_solve(derived, Direction.GFP).result)
    holds = space.leq(low, abstract_low) and space.leq(high, abstract_high)
    return DominanceVerdict(holds, 'extremal', [low, high], [abstract_low, abstract_high])
