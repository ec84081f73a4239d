"""Exception hierarchy shared by every module.

Each error carries an optional ``witness`` describing the offending data, so
callers (and the CLI) can render a precise reason without parsing messages.
"""

from __future__ import annotations


class HeckeLabError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self) -> str:
        return type(self).__name__


class NonDivisible(HeckeLabError, ArithmeticError):
    pass


class DivByZero(HeckeLabError, ZeroDivisionError):
    pass


class ParseError(HeckeLabError, ValueError):
    pass


class UnknownRoot(HeckeLabError, KeyError):
    pass


class Budget(HeckeLabError):
    pass


class NotInGroup(HeckeLabError):
    pass


class OnWall(HeckeLabError):
    pass


class DependentGradients(HeckeLabError):
    pass


class NoExtension(HeckeLabError):
    pass


class NotSpecial(HeckeLabError):
    pass


class InfiniteParabolic(HeckeLabError):
    pass


class NotExtendable(HeckeLabError):
    pass


class NotTranslation(HeckeLabError):
    pass


class BadParameters(HeckeLabError):
    pass


class BadLabels(HeckeLabError):
    pass


class BadInput(HeckeLabError, ValueError):
    pass


class MixedAlgebras(HeckeLabError):
    pass


class ParameterMismatch(HeckeLabError):
    pass


class NotRankOne(HeckeLabError):
    pass


class PreconditionFailed(HeckeLabError):
    pass
