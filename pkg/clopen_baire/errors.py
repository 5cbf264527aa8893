"""Exceptions raised by Clopen Baire."""

from typing import Sequence


class ClopenError(Exception):
    """Base class for every error this package raises on purpose."""


class OrdinalSyntaxError(ClopenError, ValueError):
    """Ordinal text that does not parse, or parses to a non-CNF notation."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class PointSpecError(ClopenError, ValueError):
    """Malformed point spec such as `0,1,(3)*`."""

    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class EmptyDomainError(ClopenError, ValueError):
    """Asked to enumerate the notations below 0."""


class EnumerationExhausted(ClopenError, IndexError):
    """Index past the end of a finite enumeration."""


class NoParentError(ClopenError, ValueError):
    """The empty sequence has no parent."""


class ComparableSequencesError(ClopenError, ValueError):
    """Split level requested for comparable sequences."""


class DomainViolation(ClopenError, ValueError):
    """A value outside the domain an operation was built for."""


class IndistinguishablePointsError(ClopenError, ValueError):
    """Two points agree on every coordinate within the available fuel."""


class FuelExhaustedError(ClopenError, RuntimeError):
    """A decision did not arrive within the fuel budget."""


class HorizonExhaustedError(ClopenError, RuntimeError):
    """The universal construction ran out of steps before serving a request."""

    def __init__(self, message: str, found: int = 0, wanted: int = 0) -> None:
        super().__init__(message)
        self.found = found
        self.wanted = wanted


class MalformedPartitionError(ClopenError, ValueError):
    """A challenger partition overlaps, escapes its base, or fails to cover it."""


class IllegalClaimError(ClopenError, ValueError):
    """A challenger claim that is not below the pending ordinal."""


class InvalidAlphaTreeError(ClopenError, ValueError):
    """An alpha-tree that fails validation."""

    def __init__(self, message: str, violations: Sequence[object] = ()) -> None:
        super().__init__(message)
        self.violations = list(violations)


class MissingLabelError(ClopenError, LookupError):
    """An alpha-tree pair with no stored label and no filler rule to supply one."""


class EmbeddingMismatchError(ClopenError, RuntimeError):
    """A finished embedding fails its own injectivity, order or label checks."""

    def __init__(self, message: str, problems: Sequence[object] = ()) -> None:
        super().__init__(message)
        self.problems = list(problems)
