"""Exception types raised across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """A network description violates one of the network invariants."""

    code = "ValidationError"

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class MalformedNetwork(ValidationError):
    code = "MalformedNetwork"


class DuplicateEdge(ValidationError):
    code = "DuplicateEdge"


class WeightOutOfRange(ValidationError):
    code = "WeightOutOfRange"


class InWeightSumExceedsOne(ValidationError):
    code = "InWeightSumExceedsOne"


class EmptyProductSet(ValidationError):
    code = "EmptyProductSet"


class ThresholdOutOfRange(ValidationError):
    code = "ThresholdOutOfRange"


class MissingThreshold(ValidationError):
    code = "MissingThreshold"


class NonPositiveC0(ValidationError):
    code = "NonPositiveC0"


class DocumentSyntaxError(ValidationError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InvalidProfile(ValueError):
    pass


class StateSpaceTooLarge(RuntimeError):
    def __init__(self, size: int, cap: int) -> None:
        super().__init__(f"state space of {size} profiles exceeds cap {cap}")
        self.size = size
        self.cap = cap


class NodeSetMismatch(ValueError):
    pass


class NotReachable(LookupError):
    pass


class NotTwoProducts(ValueError):
    pass


class StartNotEquilibrium(ValueError):
    pass


class IllegalModification(ValueError):
    pass


class MissingNewThreshold(ValueError):
    pass


class TooManyNodes(RuntimeError):
    pass


class PreconditionViolated(ValueError):
    pass


class UnknownFixture(LookupError):
    pass


class InvalidParams(ValueError):
    pass


class LatticeViolation(AssertionError):
    pass
