"""Exception hierarchy for weilvhs."""


class WeilVHSError(Exception):
    """Base class for all library errors."""


class InvalidInput(WeilVHSError, ValueError):
    """Raised for malformed parameters (bad field data, bad signature lists)."""


class InvalidAction(WeilVHSError):
    """The supplied matrix does not satisfy the minimal polynomial of the generator."""


class SignatureUnrealizable(WeilVHSError):
    """A constructed Hermitian form does not have the prescribed signatures."""


class ZeroDiagonalEntry(WeilVHSError):
    """A diagonal entry of a Hermitian form vanishes at some embedding."""


class CriterionFailed(WeilVHSError):
    """(-1)^n disc(h) has no square root in the base field."""


class ParityError(WeilVHSError):
    """A piece of level p cannot be placed in weight n because n - p is odd."""


class DegenerateSample(WeilVHSError):
    """A randomly drawn Lie algebra element turned out to be zero."""
