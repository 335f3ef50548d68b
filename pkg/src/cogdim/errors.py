"""Exception hierarchy.

Every error raised on purpose by the library derives from ``CogdimError`` so
the CLI can map it to exit code 2. ``SizeGuardError`` maps to exit code 3.
"""

from __future__ import annotations


class CogdimError(Exception):
    """Base class for all library errors."""


class ValidationError(CogdimError):
    """Input data violates a structural invariant."""


class SizeGuardError(CogdimError):
    """A construction would exceed a configured size guard."""


# poset_core
class CycleError(ValidationError):
    pass


class DuplicateIdError(ValidationError):
    pass


class UnknownElement(ValidationError, KeyError):
    pass


class EmptyOmega(ValidationError):
    pass


# homology_engine
class NegativeDimension(ValidationError):
    pass


class NotASubcomplex(ValidationError):
    pass


# group_backends
class DifferentParent(ValidationError):
    pass


class InfiniteBackend(CogdimError):
    pass


class RigidityUnknown(CogdimError):
    pass


class GroupError(ValidationError):
    pass


# scog_core
class NonInjectiveMap(ValidationError):
    pass


class IncompatibleComposition(ValidationError):
    pass


class MissingMap(ValidationError):
    pass


class UnknownIsoStatus(CogdimError):
    pass


# development
class LabelMismatch(ValidationError):
    pass


class NonInjectiveMorphism(ValidationError):
    pass


# generators
class NotFlag(ValidationError):
    pass


class NotValidated(ValidationError):
    pass


class ValidatorError(ValidationError):
    """Reflection-like validation failed."""


class NotAdmissible(ValidatorError):
    pass


class NotStrictDomain(ValidatorError):
    pass


class ConditionFailed(ValidatorError):
    def __init__(self, condition: str, message: str = "") -> None:
        self.condition = condition
        super().__init__(f"condition ({condition}) failed" + (f": {message}" if message else ""))
