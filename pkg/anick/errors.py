"""
Exception hierarchy for Anick.

Input problems derive from InputError (CLI exit code 2), failed
mathematical checks derive from CheckFailed (CLI exit code 1).
"""

from typing import Any, Optional


class AnickError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(AnickError):
    """Malformed or inconsistent user input."""


class CheckFailed(AnickError):
    """A mathematical check did not pass."""


class PresentationError(InputError):
    """A presentation violates its construction invariants."""


class NotAGSB(CheckFailed):
    """Two reductions of an ambiguity reach different normal forms."""

    def __init__(self, ambiguity: Any, nf1: Any, nf2: Any):
        self.ambiguity = ambiguity
        self.nf1 = nf1
        self.nf2 = nf2
        super().__init__(f"Not a Gröbner–Shirshov basis: ambiguity {ambiguity} reduces to {nf1} and to {nf2}")


class InvalidMatching(CheckFailed):
    """The Morse matching is not an acyclic involution on the reachable graph."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        super().__init__(message)


class CycleDetected(InvalidMatching):
    """Path tracking revisited a vertex that is still being evaluated."""


class CompositionNonzero(CheckFailed):
    """delta_n composed with delta_{n+1} left a nonzero residue."""

    def __init__(self, chain: Any, residue: Any):
        self.chain = chain
        self.residue = residue
        super().__init__(f"δδ ≠ 0 on {chain}: residue {residue}")


class RelationViolated(CheckFailed):
    """A defining relation does not hold in a bimodule."""

    def __init__(self, rule: Any, side: str):
        self.rule = rule
        self.side = side
        super().__init__(f"Relation {rule} violated by the {side} action")


class ActionsDontCommute(CheckFailed):
    """Left and right actions of a bimodule do not commute."""

    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"Left and right actions do not commute: {witness}")


class NotIdempotent(CheckFailed):
    """The designated generator does not act by an idempotent."""


class InfiniteDimensional(CheckFailed):
    """The algebra has infinitely many normal words."""


class ResourceLimit(CheckFailed):
    """A computation would exceed a configured cap."""


class InconsistentSystem(CheckFailed):
    """The generic cocycle system could not be solved consistently."""


class WitnessFailed(CheckFailed):
    """A proposed coboundary does not reproduce the cocycle."""

    def __init__(self, chain: Any, residue: Any):
        self.chain = chain
        self.residue = residue
        super().__init__(f"Coboundary witness failed on {chain}: residue {residue}")


class RankMismatch(InputError):
    """Conformal elements of different ranks were combined."""


class LeftPositivePart(CheckFailed):
    """A product produced a nonzero term of negative index."""


class IsoFailure(CheckFailed):
    """The coefficient algebra and W1 disagree on a product."""

    def __init__(self, witness: Any):
        self.witness = witness
        super().__init__(f"Isomorphism check failed on {witness}")
