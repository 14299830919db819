"""Exception types shared across the package."""

from __future__ import annotations


class HindmanLabError(Exception):
    """Base class for all errors raised by this package."""


class RangeError(HindmanLabError):
    """A Cayley table entry or element id is outside 0..n-1."""


class AssocViolation(HindmanLabError):
    """A Cayley table failed the associativity check.

    Carries the lexicographically least offending triple (a, b, c) with
    the two mismatched products.
    """

    def __init__(self, a: int, b: int, c: int, left: int, right: int):
        self.triple = (a, b, c)
        self.left = left
        self.right = right
        super().__init__(
            f"associativity fails at triple ({a},{b},{c}): "
            f"(a*b)*c={left} but a*(b*c)={right}"
        )


class EscapesTruncation(HindmanLabError):
    """A product left the enumerated prefix of a lazy family."""

    def __init__(self, base: int, power: int):
        self.base = base
        self.power = power
        super().__init__(f"power {power} of element {base} escapes the truncation")


class NotIdempotent(HindmanLabError):
    """The element passed as an idempotent satisfies e*e != e."""


class NotAGroup(HindmanLabError):
    """The semigroup is not a group (no two-sided identity or missing inverses)."""


class OrderViolation(HindmanLabError):
    """An element of multiplicative order greater than 2 was found."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has order greater than 2")


class BadSpec(HindmanLabError):
    """A family spec string or parameter set is invalid."""


class BadPattern(HindmanLabError):
    """An equality pattern breaks associativity or collapses a generator."""


class CapExceeded(HindmanLabError):
    """A product-set enumeration was requested above its hard cap."""


class StuckAt(HindmanLabError):
    """Greedy subsequence refinement found no admissible element."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"no admissible element at step {step}")


class RamseyFail(HindmanLabError):
    """No monochromatic clique of the requested size exists in the finite prefix."""

    def __init__(self, target: int):
        self.target = target
        super().__init__(f"no monochromatic clique of size {target} in this vertex set")


class NotOutsideS2(HindmanLabError):
    """A sequence element is a product of two elements, violating the precondition."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} lies in S*S")


class PrecondViolation(HindmanLabError):
    """An operation precondition does not hold."""


class PremiseFailed(HindmanLabError):
    """A verifier premise fails; carries a concrete witness."""

    def __init__(self, message: str, witness: object):
        self.witness = witness
        super().__init__(message)


class CaseInapplicable(HindmanLabError):
    """The requested verification case does not apply to this input."""


class UnknownLemma(HindmanLabError):
    """The verify subcommand was given an unknown check name."""


class FormatError(HindmanLabError):
    """A cayley/coloring file is malformed."""
