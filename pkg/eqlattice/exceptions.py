"""
Exception hierarchy for the equilibrium toolkit.

Verification outcomes (verdicts) are returned as values; exceptions are kept
for inputs that make a computation meaningless.
"""
from typing import Any, Optional, Sequence


class EquilibriumError(Exception):
    """Base class for every error raised by eqlattice."""


class LatticeError(EquilibriumError):
    """Structural misuse of a lattice: dimension mismatch, non-member, bad index."""


class ContractViolation(LatticeError):
    """An operation was called outside its documented precondition."""


class ConstructionError(LatticeError):
    """A lattice or Galois connection could not be built from the given data."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class UnsupportedOperation(EquilibriumError):
    """Enumeration or exhaustive checking was requested on an infinite lattice."""


class NoMaximum(EquilibriumError):
    """A best response is empty: no payoff vector dominates all the others."""

    def __init__(self, player: int, profile: Any):
        super().__init__(
            f"player {player + 1} has no payoff maximum against opponents' profile {profile!r}"
        )
        self.player = player
        self.profile = profile


class NonConvergence(EquilibriumError):
    """An iteration hit its cap before reaching a fixed point."""

    def __init__(self, cap: int, last_iterates: Sequence[Any]):
        super().__init__(
            f"no fixed point after {cap} iterations; last iterates: {list(last_iterates)!r}"
        )
        self.cap = cap
        self.last_iterates = list(last_iterates)


class PreconditionViolation(EquilibriumError):
    """The extremal element of an image is missing from the image itself."""

    def __init__(self, message: str, element: Any = None):
        super().__init__(message)
        self.element = element


class InconsistentModel(EquilibriumError):
    """No sign assignment yields a self-consistent solution of a piecewise-linear model."""


class GameSpecError(EquilibriumError):
    """Parse error in a game or abstraction file."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ''
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else '') + ': '
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column
