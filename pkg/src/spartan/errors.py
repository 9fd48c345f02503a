"""Error classes reported by the parser and the kernel.

The class name of a :class:`CheckError` subclass is the error class shown
in reports (``ERROR TypeMismatch at file:3:7``).
"""

from __future__ import annotations

from typing import Optional

from .syntax import Span


class SpartanError(Exception):
    kind = "Error"

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span
        self.decl: Optional[str] = None

    def details(self) -> list[str]:
        return [self.message]


class ParseError(SpartanError):
    kind = "ParseError"


class CheckError(SpartanError):
    @property
    def kind(self) -> str:  # type: ignore[override]
        return type(self).__name__


class UnboundName(CheckError):
    pass


class LevelArityMismatch(CheckError):
    pass


class TypeMismatch(CheckError):
    def __init__(self, message: str, expected: str, got: str, span: Optional[Span] = None):
        super().__init__(message, span)
        self.expected = expected
        self.got = got

    def details(self) -> list[str]:
        return [self.message, f"expected: {self.expected}", f"     got: {self.got}"]


class NotAFunction(CheckError):
    pass


class NotAPair(CheckError):
    pass


class NotAUniverse(CheckError):
    pass


class CheckOnlyTermInInferPosition(CheckError):
    pass


class UnsafeAssume(CheckError):
    pass


class DepthExceeded(CheckError):
    pass


class KernelBug(Exception):
    """Raised on ill-scoped or ill-typed input that checking should have excluded."""


class InternalScope(KernelBug):
    pass


class InternalNotAFunction(KernelBug):
    pass
