"""
Least and greatest fixed points of multivalued maps and games.

``iterate_multivalued`` runs the simultaneous Knaster-Tarski iteration
x <- meet f(x) (join for the greatest fixed point). ``rt_solve`` runs the
round-robin Robinson-Topkis sweep over players. ``enumerate_equilibria`` is
the brute-force oracle.
"""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Tuple

from eqlattice.exceptions import ContractViolation, NonConvergence, PreconditionViolation, UnsupportedOperation
from eqlattice.game_model import Correspondence, Game
from eqlattice.lattice_core import Elem, Lattice

logger = logging.getLogger('eqlattice')

# Sweep cap used when the strategy space is infinite
DEFAULT_MAX_SWEEPS = 10000


class Direction(Enum):
    LFP = 'lfp'
    GFP = 'gfp'

    def select(self, lattice: Lattice, candidates) -> Elem:
        return lattice.meet(candidates) if self is Direction.LFP else lattice.join(candidates)

    def start(self, lattice: Lattice) -> Elem:
        return lattice.bot if self is Direction.LFP else lattice.top


@dataclass
class SolveTrace:
    """
    Record of one fixed-point run.

    ``iterates`` starts with the initial point and holds one snapshot per
    assignment, so unchanged assignments repeat the previous profile.
    ``best_response_calls`` counts per-component maximizer evaluations.
    """

    direction: Direction
    iterates: List[Elem]
    best_response_calls: int
    result: Elem
    sweeps: int = 0

    def distinct_iterates(self) -> List[Elem]:
        steps = self.iterates[:1]
        for s in self.iterates[1:]:
            if s != steps[-1]:
                steps.append(s)
        return steps

    def is_monotone_chain(self, lattice: Lattice) -> bool:
        pairs = zip(self.iterates, self.iterates[1:])
        if self.direction is Direction.LFP:
            return all(lattice.leq(a, b) for a, b in pairs)
        return all(lattice.leq(b, a) for a, b in pairs)


@dataclass
class FixedPointSet:
    elements: FrozenSet
    is_lattice: bool


@dataclass
class EquilibriumReport:
    lne: Elem
    gne: Elem
    all_equilibria: Optional[FrozenSet] = None
    traces: Tuple[Optional[SolveTrace], Optional[SolveTrace]] = field(default=(None, None))

    @property
    def is_unique(self) -> bool:
        return self.lne == self.gne


def _iteration_cap(lattice: Lattice, max_sweeps: Optional[int]) -> int:
    if max_sweeps is not None:
        return max_sweeps
    if lattice.is_finite:
        return lattice.cardinality() + 1
    return DEFAULT_MAX_SWEEPS


def iterate_multivalued(f: Correspondence, direction: Direction = Direction.LFP,
                        max_iterations: Optional[int] = None) -> SolveTrace:
    """Simultaneous iteration from bottom (top) selecting meet f(x) (join f(x))."""
    lattice = f.domain
    cap = _iteration_cap(lattice, max_iterations)
    x = direction.start(lattice)
    iterates = [x]
    calls = 0
    for _ in range(cap):
        image = f(x)
        calls += 1
        if not image:
            raise PreconditionViolation(f"{f.label or 'f'}({x!r}) is empty", element=x)
        pick = direction.select(lattice, image)
        if pick not in image:
            raise PreconditionViolation(
                f"{direction.value}: extremal element {pick!r} of {f.label or 'f'}({x!r}) "
                f"is not in the image", element=x,
            )
        if pick == x:
            return SolveTrace(direction, iterates, calls, x, sweeps=len(iterates))
        x = pick
        iterates.append(x)
    raise NonConvergence(cap, iterates[-2:])


def lfp_multivalued(f: Correspondence, max_iterations: Optional[int] = None) -> Elem:
    return iterate_multivalued(f, Direction.LFP, max_iterations).result


def gfp_multivalued(f: Correspondence, max_iterations: Optional[int] = None) -> Elem:
    return iterate_multivalued(f, Direction.GFP, max_iterations).result


def rt_solve(G: Game, direction: Direction = Direction.LFP, start: Optional[Elem] = None,
             max_sweeps: Optional[int] = None, order: Optional[Sequence[int]] = None) -> SolveTrace:
    """
    Robinson-Topkis round-robin iteration.

    Players are swept in ascending order (or in ``order``), each assigned
    the meet (join) of their best response to the current profile; the run
    stops after a sweep that changes nothing. Every assignment counts N_i
    calls, the final stationary sweep included.

    Args:
        G: the game
        direction: LFP from the bottom profile, GFP from the top
        start: optional starting profile instead of bottom/top
        max_sweeps: sweep cap (defaults to |S|+1, or DEFAULT_MAX_SWEEPS when S is infinite)
        order: 0-based player indices giving the sweep order, a permutation of all players

    Returns:
        SolveTrace with per-assignment snapshots
    """
    space = G.profile_space
    sweep_order = list(range(G.players)) if order is None else list(order)
    if sorted(sweep_order) != list(range(G.players)):
        raise ContractViolation(f"sweep order {sweep_order} is not a permutation of 0..{G.players - 1}")
    cap = _iteration_cap(space, max_sweeps)
    s = space.require(start) if start is not None else direction.start(space)
    iterates = [s]
    calls = 0
    logger.debug(f"RT {direction.value} on {G!r} from {s!r}")

    for sweep in range(1, cap + 1):
        changed = False
        for i in sweep_order:
            responses = G.best_response_i(i, space.drop(s, i))
            pick = direction.select(G.spaces[i], responses)
            if pick not in responses:
                raise PreconditionViolation(
                    f"player {i + 1}: {direction.value} selection {pick!r} is not a best response",
                    element=s,
                )
            calls += G.utilities[i].arity
            if pick != s[i]:
                s = s[:i] + (pick,) + s[i + 1:]
                changed = True
            iterates.append(s)
        if not changed:
            logger.info(f"RT {direction.value} reached {s!r} after {sweep} sweeps, {calls} calls")
            return SolveTrace(direction, iterates, calls, s, sweeps=sweep)

    raise NonConvergence(cap, iterates[-2:])


def _scan_chunk(G: Game, profiles: Sequence[Elem]) -> List[Elem]:
    space = G.profile_space
    return [
        s for s in profiles
        if all(s[i] in G.best_response_i(i, space.drop(s, i)) for i in range(G.players))
    ]


def enumerate_equilibria(G: Game, max_workers: int = 4, chunk_size: int = 2048) -> FrozenSet:
    """Exact set {s | s in B(s)} by exhaustive scan, split across a thread pool."""
    space = G.profile_space
    if not space.is_finite:
        raise UnsupportedOperation(f"cannot enumerate equilibria of {G!r}: infinite strategy spaces")
    profiles = space.enumerate()
    chunks = [profiles[k:k + chunk_size] for k in range(0, len(profiles), chunk_size)]
    found = set()

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_chunk = {
            executor.submit(_scan_chunk, G, chunk): index
            for index, chunk in enumerate(chunks)
        }
        for future in as_completed(future_to_chunk):
            found.update(future.result())

    logger.info(f"Scanned {len(profiles)} profiles of {G!r}: {len(found)} equilibria")
    return frozenset(found)


def _forms_lattice(L: Lattice, elements: FrozenSet) -> bool:
    if not elements:
        return False
    items = list(elements)
    for a in items:
        for b in items:
            lower = [z for z in items if L.leq(z, a) and L.leq(z, b)]
            upper = [z for z in items if L.leq(a, z) and L.leq(b, z)]
            if not any(all(L.leq(w, z) for w in lower) for z in lower):
                return False
            if not any(all(L.leq(z, w) for w in upper) for z in upper):
                return False
    return True


def fix_set_multivalued(f: Correspondence) -> FixedPointSet:
    """{x | x in f(x)} over a finite domain, and whether it is a lattice in the induced order."""
    lattice = f.domain
    elements = frozenset(x for x in lattice.enumerate() if x in f(x))
    return FixedPointSet(elements=elements, is_lattice=_forms_lattice(lattice, elements))


def solve_game(G: Game, enumerate_all: bool = True, max_workers: int = 4,
               max_sweeps: Optional[int] = None) -> EquilibriumReport:
    low = rt_solve(G, Direction.LFP, max_sweeps=max_sweeps)
    high = rt_solve(G, Direction.GFP, max_sweeps=max_sweeps)
    everything = None
    if enumerate_all and G.profile_space.is_finite:
        everything = enumerate_equilibria(G, max_workers=max_workers)
    if not G.profile_space.leq(low.result, high.result):
        logger.warning(f"lne {low.result!r} is not below gne {high.result!r}: "
                       f"the game is probably not supermodular")
    return EquilibriumReport(low.result, high.result, everything, (low, high))

