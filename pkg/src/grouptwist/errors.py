"""Exception types shared across the package."""

from __future__ import annotations


class GroupError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GroupError):
    """A multiplication table failed group validation."""


class NotLatinError(ValidationError):
    """A table row or column is not a permutation of the element indices."""


class NotAssociativeError(ValidationError):
    """Associativity fails; carries one witnessing triple of indices."""

    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        super().__init__(f"associativity fails at triple {triple}")


class NoIdentityError(ValidationError):
    """No two-sided identity element exists."""


class NoInverseError(ValidationError):
    """Some element has no two-sided inverse."""


class OrderCapExceededError(GroupError):
    """A construction would exceed the configured order cap."""


class ArityTooSmallError(GroupError):
    """An iterated commutator needs at least two elements."""


class NotNormalError(GroupError):
    """The given subgroup is not normal in its parent."""


class NotInvariantError(GroupError):
    """An automorphism does not stabilize the given subgroup."""

    def __init__(self, message: str, witness: int | None = None):
        self.witness = witness
        super().__init__(message)


class AutomorphismOrderMismatchError(GroupError):
    """The n-fold composite of the automorphism is not the identity map."""


class TooManyAutomorphismsError(GroupError):
    """Automorphism enumeration exceeded the configured size budget."""


class UnknownFamilyError(GroupError):
    """Unrecognized group family constructor."""


class ParseError(GroupError):
    """A document or spec string could not be parsed."""


class EmptySetError(GroupError):
    """An operation requires a nonempty subset."""
