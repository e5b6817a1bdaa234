"""
Bertrand oligopoly models with exact rational payoffs.

``bertrand3_model`` is the three-firm price game on a 1/20 price grid.
``bertrand2_model`` is the two-firm, two-product game on [3/2, 5/2]^2 whose
per-product profits have closed-form maximizers; ``bertrand2_exact_equilibria``
solves its piecewise-linear fixed-point equations directly.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from eqlattice.exceptions import ContractViolation, InconsistentModel
from eqlattice.game_model import Game, Utility
from eqlattice.lattice_core import Lattice, Product, RationalGrid, RationalInterval

logger = logging.getLogger('eqlattice')


def sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class FirmDemand:
    """d_i(s) = base + cross * (sum of rival prices) + linear * s_i - quadratic * s_i^2."""

    base: Fraction
    cross: Fraction
    linear: Fraction
    quadratic: Fraction
    cost: Fraction

    def profit(self, own, rivals_total) -> Fraction:
        demand = self.base + self.cross * rivals_total + self.linear * own - self.quadratic * own * own
        return demand * (own - self.cost)


DEFAULT_FIRMS = (
    FirmDemand(Fraction(370), Fraction(213), Fraction(60), Fraction(230), Fraction('1.10')),
    FirmDemand(Fraction(360), Fraction(233), Fraction(55), Fraction(220), Fraction('1.20')),
    FirmDemand(Fraction(375), Fraction(226), Fraction(50), Fraction(200), Fraction('1.25')),
)


@dataclass(frozen=True)
class Bertrand3Params:
    firms: Tuple[FirmDemand, ...] = DEFAULT_FIRMS
    price_lo: Fraction = Fraction(1)
    price_hi: Fraction = Fraction('2.3')
    price_step: Fraction = Fraction(1, 20)
    floor_payoffs: bool = False


def bertrand3_model(params: Optional[Bertrand3Params] = None) -> Game:
    """
    Three-firm price competition, u_i(s) = d_i(s)(s_i - c_i) on a rational price grid.

    With ``floor_payoffs`` every profit is replaced by its integer part.
    """
    params = params or Bertrand3Params()
    grid = RationalGrid(params.price_lo, params.price_hi, params.price_step)
    utilities = []
    for i, firm in enumerate(params.firms):
        def evaluate(s, i=i, firm=firm):
            value = firm.profit(s[i], sum(s) - s[i])
            if params.floor_payoffs:
                value = Fraction(math.floor(value))
            return (value,)

        utilities.append(Utility(player=i, arity=1, evaluate=evaluate, label=f"u_{i + 1}"))

    return Game(
        spaces=[grid] * len(params.firms),
        utilities=utilities,
        kind='bertrand3',
        metadata={
            'prices': [str(params.price_lo), str(params.price_hi), str(params.price_step)],
            'floor': params.floor_payoffs,
        },
    )


@dataclass(frozen=True)
class ProductDemand:
    """
    One product of a two-product firm.

    u(s, o) = (base - slope*s - own_step*sgn(s - 11/5) + c1*o1 + c2*o2
               + weight*sgn(kind(o1, o2) - 4)) * (s - cost),
    where o = (o1, o2) are the rival firm's two prices and kind is their
    product or their sum.
    """

    base: Fraction
    slope: Fraction
    cost: Fraction
    cross: Tuple[Fraction, Fraction]
    weight: Fraction
    kind: str
    own_step: Fraction = Fraction(0)

    def signal(self, rival) -> int:
        o1, o2 = rival
        combined = o1 * o2 if self.kind == 'product' else o1 + o2
        return sgn(combined - 4)

    def profit(self, own, rival) -> Fraction:
        o1, o2 = rival
        demand = (self.base - self.slope * own - self.own_step * sgn(own - Fraction(11, 5))
                  + self.cross[0] * o1 + self.cross[1] * o2 + self.weight * self.signal(rival))
        return demand * (own - self.cost)

    def coefficients(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        """Constant, two rival slopes and sign weight of the stationary point (own step ignored)."""
        denominator = 2 * self.slope
        return (
            (self.base + self.slope * self.cost) / denominator,
            self.cross[0] / denominator,
            self.cross[1] / denominator,
            self.weight / denominator,
        )

    def maximizer(self, rival) -> Fraction:
        constant, a, b, w = self.coefficients()
        return constant + a * rival[0] + b * rival[1] + w * self.signal(rival)


DEFAULT_PRODUCTS = (
    (
        ProductDemand(Fraction(52), Fraction(21), Fraction(1), (Fraction(1), Fraction(4)),
                      Fraction(8), 'product'),
        ProductDemand(Fraction(51), Fraction(21), Fraction(11, 10), (Fraction(2), Fraction(3)),
                      Fraction(4), 'sum', own_step=Fraction(1)),
    ),
    (
        ProductDemand(Fraction(50), Fraction(20), Fraction(11, 10), (Fraction(3), Fraction(2)),
                      Fraction(2), 'sum', own_step=Fraction(1)),
        ProductDemand(Fraction(49), Fraction(20), Fraction(1), (Fraction(4), Fraction(1)),
                      Fraction(1), 'product'),
    ),
)

PRICE_RANGE = (Fraction(3, 2), Fraction(5, 2))


def bertrand2_model(products: Sequence[Sequence[ProductDemand]] = DEFAULT_PRODUCTS,
                    price_step: Optional[Fraction] = None) -> Game:
    """
    Two firms, two products each, vector payoffs (u_i1, u_i2).

    Without ``price_step`` every price ranges over the rational interval
    [3/2, 5/2] and best responses come from the closed-form maximizers.
    With a step the prices live on a finite grid and best responses are
    found by scanning each product separately.
    """
    lo, hi = PRICE_RANGE
    price: Lattice = RationalInterval(lo, hi) if price_step is None else RationalGrid(lo, hi, price_step)
    space = Product([price, price])

    utilities = []
    for i, (first, second) in enumerate(products):
        def evaluate(s, i=i, first=first, second=second):
            own, rival = s[i], s[1 - i]
            return (first.profit(own[0], rival), second.profit(own[1], rival))

        def maximizer(rival, first=first, second=second):
            return (first.maximizer(rival), second.maximizer(rival))

        utilities.append(Utility(
            player=i,
            arity=2,
            evaluate=evaluate,
            component_dependency=True,
            maximizer=maximizer if price_step is None else None,
            label=f"u_{i + 1}",
        ))

    return Game(
        spaces=[space, space],
        utilities=utilities,
        kind='bertrand2',
        metadata={'price_step': str(price_step) if price_step is not None else None},
    )


def _solve_linear(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan elimination over the rationals; None when the system is singular."""
    size = len(rhs)
    rows = [list(row) + [value] for row, value in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [v - factor * p for v, p in zip(rows[r], rows[col])]
    return [row[size] for row in rows]


def bertrand2_exact_equilibria(products: Sequence[Sequence[ProductDemand]] = DEFAULT_PRODUCTS
                               ) -> Tuple[tuple, tuple]:
    """
    Least and greatest equilibria of the continuous two-firm game.

    Every sign term in the maximizers is fixed to -1, 0 or +1; each choice
    gives a 4x4 linear system s = f(s). Solutions that reproduce their own
    signs and lie in the price box are equilibria, and the componentwise
    min and max of those are returned as nested profiles.
    """
    lo, hi = PRICE_RANGE
    demands = [d for firm in products for d in firm]
    if len(demands) != 4:
        raise ContractViolation("the exact solver handles two firms with two products each")

    # variable order: s11, s12, s21, s22; rivals of firm i sit at columns of firm 1-i
    rival_columns = {0: (2, 3), 1: (2, 3), 2: (0, 1), 3: (0, 1)}
    matrix = [[Fraction(0)] * 4 for _ in range(4)]
    for row, demand in enumerate(demands):
        _, a, b, _ = demand.coefficients()
        matrix[row][row] = Fraction(1)
        first, second = rival_columns[row]
        matrix[row][first] -= a
        matrix[row][second] -= b

    solutions = []
    for signs in itertools.product((-1, 0, 1), repeat=4):
        rhs = [d.coefficients()[0] + d.coefficients()[3] * sign for d, sign in zip(demands, signs)]
        solution = _solve_linear(matrix, rhs)
        if solution is None:
            continue
        consistent = all(
            d.signal((solution[c1], solution[c2])) == sign
            for d, sign, (c1, c2) in zip(demands, signs, (rival_columns[r] for r in range(4)))
        )
        if consistent and all(lo <= v <= hi for v in solution):
            logger.debug(f"sign pattern {signs} gives equilibrium {solution}")
            solutions.append(solution)

    if not solutions:
        raise InconsistentModel("no sign assignment gives a self-consistent equilibrium")
    least = [min(column) for column in zip(*solutions)]
    greatest = [max(column) for column in zip(*solutions)]
    logger.info(f"{len(solutions)} sign-consistent equilibria of the two-firm model")
    return (
        ((least[0], least[1]), (least[2], least[3])),
        ((greatest[0], greatest[1]), (greatest[2], greatest[3])),
    )
