"""Exception hierarchy shared by every module of the workbench."""
from typing import Any, Optional


class NcfiltError(Exception):
    """Base class; ``context`` carries the structured data reported by the CLI."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict:
        details = {key: _plain(value) for key, value in self.context.items()}
        return {"type": type(self).__name__, "error": self.message, "details": details}


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return str(value)


# scalars
class DomainMismatch(NcfiltError):
    pass


class DenominatorVanishes(NcfiltError):
    pass


class NoRootOfUnity(NcfiltError):
    pass


class MixedCyclotomicOrders(NcfiltError):
    pass


# rewriting
class NotOrientable(NcfiltError):
    pass


class DuplicateLhs(NcfiltError):
    pass


class ConfluenceNotEstablished(NcfiltError):
    pass


class NonTerminatingReduction(NcfiltError):
    """Raised when a reduction revisits a word; ``difference`` is what the loop adds."""

    def __init__(self, message: str, word, difference, **context: Any):
        super().__init__(message, **context)
        self.word = word
        self.difference = difference


class InfiniteFiltrationPiece(NcfiltError):
    pass


# constructors
class AxiomViolation(NcfiltError):
    pass


class NotADerivation(NcfiltError):
    pass


class InvalidQMatrix(NcfiltError):
    pass


class ZeroParameter(NcfiltError):
    pass


class BetaZero(NcfiltError):
    pass


class RootsInconsistent(NcfiltError):
    pass


class SuperTensorUnsupported(NcfiltError):
    pass


class GradedDimensionMismatch(NcfiltError):
    pass


class ParityInhomogeneous(NcfiltError):
    pass


# group actions
class RelationNotPreserved(NcfiltError):
    pass


class FiltrationViolated(NcfiltError):
    pass


class CapExceeded(NcfiltError):
    pass


class OrderNotInvertible(NcfiltError):
    pass


class NotLinearizable(NcfiltError):
    pass


class WitnessMismatch(NcfiltError):
    pass


# presentation files
class ParseError(NcfiltError):
    def __init__(self, message: str, line: int, col: int, expected: Optional[str] = None):
        super().__init__(f"line {line}, column {col}: {message}", line=line, col=col, expected=expected)
        self.line = line
        self.col = col
        self.expected = expected


class UnknownGenerator(NcfiltError):
    pass


class UnknownFamily(NcfiltError):
    pass
