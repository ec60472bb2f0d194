"""Abstract syntax and runtime values of FLang programs.

All nodes are frozen dataclasses.  Statement and expression nodes carry an
optional source location (``loc``) that takes no part in equality, so a
parsed program compares equal to the same program built by hand.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

Loc = tuple[int, int]


def _loc():
    return field(default=None, compare=False, repr=False, kw_only=True)


# -- values ----------------------------------------------------------------

@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Symbol:
    """Automaton state or event; compares by name only."""

    name: str


class Port(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> Port:
        return Port.RIGHT if self is Port.LEFT else Port.LEFT


Value = Union[Int, Bool, Text, Symbol, Port]

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


def sort_name(v: Value) -> str:
    if isinstance(v, Port):
        return "port"
    return type(v).__name__.lower()


def render_value(v: Value) -> str:
    """Surface spelling of a value, shared by the printer and packet codec."""
    if isinstance(v, Int):
        return str(v.value)
    if isinstance(v, Bool):
        return "true" if v.value else "false"
    if isinstance(v, Symbol):
        return "'" + v.name
    if isinstance(v, Port):
        return v.value
    if isinstance(v, Text):
        escaped = (v.value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        return '"' + escaped + '"'
    raise TypeError(f"not a FLang value: {v!r}")


# -- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    value: Value
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class AutomatonState:
    """``#A`` in an expression: the current state of instance ``A``."""

    instance: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class PacketField:
    name: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class ArrivalTime:
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class ArrivalPort:
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: Expression
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Binary:
    op: str
    left: Expression
    right: Expression
    loc: Loc | None = _loc()


Expression = Union[Lit, Var, AutomatonState, PacketField, ArrivalTime,
                   ArrivalPort, Unary, Binary]

UNARY_OPS = ("-", "!")
BINARY_OPS = ("*", "/", "+", "-", "<", "<=", ">", ">=", "==", "!=", "&&", "||")


# -- statements and commands -----------------------------------------------

@dataclass(frozen=True)
class Seq:
    first: Statement
    second: Statement
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Cond:
    guard: Expression
    body: Statement
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Iter:
    count: Expression
    body: Statement
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class NewInterrupt:
    at: Expression
    period: Expression | None
    body: Statement
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Nop:
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Accept:
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Drop:
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Send:
    port: Port
    fields: tuple[tuple[str, Expression], ...]
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Alarm:
    message: Expression
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Set:
    var: str
    value: Expression
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class NewAutomaton:
    instance: str
    kind: str
    loc: Loc | None = _loc()


@dataclass(frozen=True)
class Step:
    instance: str
    event: Symbol
    on_fail: Statement
    loc: Loc | None = _loc()


Command = Union[Nop, Accept, Drop, Send, Alarm, Set, NewAutomaton, Step]
Statement = Union[Seq, Cond, Iter, NewInterrupt, Command]


# -- programs --------------------------------------------------------------

@dataclass(frozen=True)
class Transition:
    source: Symbol
    event: Symbol
    target: Symbol


@dataclass(frozen=True)
class AutomatonKindDef:
    kind: str
    initial: Symbol
    transitions: tuple[Transition, ...] = ()
    loc: Loc | None = _loc()

    def table(self) -> dict[tuple[Symbol, Symbol], Symbol]:
        return {(t.source, t.event): t.target for t in self.transitions}


@dataclass(frozen=True)
class InitBlock:
    body: Statement
    loc: Loc | None = _loc()


PrologueItem = Union[AutomatonKindDef, InitBlock]


@dataclass(frozen=True)
class Program:
    prologue: tuple[PrologueItem, ...]
    filter: Statement


def seq(*stmts: Statement) -> Statement:
    """Right-nested sequence, the shape the parser builds for a block."""
    if not stmts:
        raise ValueError("seq() needs at least one statement")
    result = stmts[-1]
    for s in reversed(stmts[:-1]):
        result = Seq(s, result)
    return result


def sub_statements(s: Statement) -> tuple[Statement, ...]:
    match s:
        case Seq(first, second):
            return (first, second)
        case Cond(_, body) | Iter(_, body) | NewInterrupt(_, _, body):
            return (body,)
        case Step(_, _, on_fail):
            return (on_fail,)
    return ()


def walk(s: Statement):
    """Pre-order traversal of a statement tree."""
    stack = [s]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(sub_statements(node)))
