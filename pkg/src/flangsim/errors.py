"""Exception hierarchy shared by the parser, evaluator and machine."""

from __future__ import annotations


class FlangError(Exception):
    """Base class for every error raised by flangsim."""


class ParseError(FlangError):
    """Syntax error at a 1-based ``line``/``column`` of the source."""

    def __init__(self, line: int, column: int, message: str, expected=()):
        self.line = line
        self.column = column
        self.message = message
        self.expected = frozenset(expected)
        super().__init__(str(self))

    def __str__(self):
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += " (expected " + ", ".join(sorted(self.expected)) + ")"
        return text


class ProgramError(FlangError):
    """A syntactically valid program that breaks a well-formedness rule."""

    def __init__(self, message: str, loc=None):
        self.loc = loc
        if loc is not None:
            message = f"{loc[0]}:{loc[1]}: {message}"
        super().__init__(message)


class DuplicateKind(ProgramError):
    pass


class DuplicateTransition(ProgramError):
    pass


class FlangRuntimeError(FlangError):
    """Error raised while executing a program.

    The machine fills in ``clock`` and ``loc`` (line, column of the
    statement being executed) before the error leaves it.
    """

    clock: int | None = None
    loc: tuple[int, int] | None = None

    def describe(self) -> str:
        parts = [f"{type(self).__name__}: {self}"]
        if self.clock is not None:
            parts.append(f"at clock {self.clock}")
        if self.loc is not None:
            parts.append(f"statement at {self.loc[0]}:{self.loc[1]}")
        return ", ".join(parts)


class FlangTypeError(FlangRuntimeError):
    pass


class FlangArithmeticError(FlangRuntimeError):
    pass


class DivisionByZero(FlangArithmeticError):
    pass


class NegativeIterationCount(FlangRuntimeError):
    pass


class UnknownAutomaton(FlangRuntimeError):
    pass


class UnknownKind(FlangRuntimeError):
    pass


class NoPacketContext(FlangRuntimeError):
    pass


class UndefinedVariable(FlangRuntimeError):
    pass


class UnknownField(FlangRuntimeError):
    pass


class InvalidInterrupt(FlangRuntimeError):
    """Trigger time not strictly in the future, or non-positive period."""


class NonMonotoneInput(FlangRuntimeError):
    pass


class StepLimitExceeded(FlangRuntimeError):
    pass
