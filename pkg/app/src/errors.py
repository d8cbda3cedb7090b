from typing import Literal

from pydantic import BaseModel


class SoergelError(Exception):
    pass


class RingMismatchError(SoergelError):
    pass


class NotInvariantError(SoergelError):
    pass


class SkewPolyParseError(SoergelError):
    pass


class MorphismError(SoergelError):
    pass


class NotIdempotentError(MorphismError):
    pass


class UnknownMapError(SoergelError):
    pass


class ComplexError(SoergelError):
    pass


class PivotError(ComplexError):
    pass


class UnknownSummandError(SoergelError):
    pass


class ExpressionError(SoergelError):
    pass


class ErrorResponse(BaseModel):
    detail: str


class UsageErrorResponse(ErrorResponse):
    type: Literal["usage"] = "usage"


class CheckFailedResponse(ErrorResponse):
    type: Literal["check"] = "check"
