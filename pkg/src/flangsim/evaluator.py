"""Strict, left-to-right expression evaluation.

``&&`` and ``||`` evaluate both operands before combining them; there is
no short-circuiting.  ``false && pkt.missing`` therefore raises UnknownField.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from . import ast as A
from .errors import (DivisionByZero, FlangArithmeticError, FlangRuntimeError,
                     FlangTypeError, NoPacketContext, UndefinedVariable,
                     UnknownAutomaton, UnknownField)

_EMPTY = MappingProxyType({})


@dataclass(frozen=True)
class EvalContext:
    """Read-only view of everything an expression may observe."""

    vars: Mapping[str, A.Value] = _EMPTY
    automata: Mapping[str, tuple[str, A.Symbol]] = _EMPTY
    has_packet: bool = False
    fields: Mapping[str, A.Value] = field(default=_EMPTY)
    time: int | None = None
    port: A.Port | None = None


def _int(v: int) -> A.Int:
    if not A.INT64_MIN <= v <= A.INT64_MAX:
        raise FlangArithmeticError(f"integer overflow: {v}")
    return A.Int(v)


def _require(kind, v: A.Value, op: str):
    if not isinstance(v, kind):
        raise FlangTypeError(f"operator {op} not defined on {A.sort_name(v)}")


def apply_unary(op: str, v: A.Value) -> A.Value:
    if op == "-":
        _require(A.Int, v, op)
        return _int(-v.value)
    if op == "!":
        _require(A.Bool, v, op)
        return A.Bool(not v.value)
    raise ValueError(f"unknown unary operator {op!r}")


def apply_binary(op: str, l: A.Value, r: A.Value) -> A.Value:
    if op in ("==", "!="):
        if type(l) is not type(r):
            raise FlangTypeError(
                f"cannot compare {A.sort_name(l)} with {A.sort_name(r)}")
        return A.Bool((l == r) == (op == "=="))
    if op in ("&&", "||"):
        _require(A.Bool, l, op)
        _require(A.Bool, r, op)
        return A.Bool(l.value and r.value if op == "&&" else l.value or r.value)
    if op not in A.BINARY_OPS:
        raise ValueError(f"unknown binary operator {op!r}")
    _require(A.Int, l, op)
    _require(A.Int, r, op)
    a, b = l.value, r.value
    match op:
        case "+":
            return _int(a + b)
        case "-":
            return _int(a - b)
        case "*":
            return _int(a * b)
        case "/":
            if b == 0:
                raise DivisionByZero("division by zero")
            q = abs(a) // abs(b)
            return _int(q if (a < 0) == (b < 0) else -q)
        case "<":
            return A.Bool(a < b)
        case "<=":
            return A.Bool(a <= b)
        case ">":
            return A.Bool(a > b)
        case ">=":
            return A.Bool(a >= b)


def _packet(ctx: EvalContext, what: str):
    if not ctx.has_packet:
        raise NoPacketContext(f"{what} used outside packet filtering")


def eval_expr(e: A.Expression, ctx: EvalContext) -> A.Value:
    match e:
        case A.Lit(value):
            return value
        case A.Var(name):
            try:
                return ctx.vars[name]
            except KeyError:
                raise UndefinedVariable(f"variable {name} read before being set") from None
        case A.AutomatonState(inst):
            try:
                return ctx.automata[inst][1]
            except KeyError:
                raise UnknownAutomaton(f"automaton #{inst} does not exist") from None
        case A.PacketField(name):
            _packet(ctx, "pkt." + name)
            try:
                return ctx.fields[name]
            except KeyError:
                raise UnknownField(f"packet has no field {name}") from None
        case A.ArrivalTime():
            _packet(ctx, "arrivalTime")
            return A.Int(ctx.time)
        case A.ArrivalPort():
            _packet(ctx, "arrivalPort")
            return ctx.port
        case A.Unary(op, operand):
            return apply_unary(op, eval_expr(operand, ctx))
        case A.Binary(op, left, right):
            lv = eval_expr(left, ctx)
            rv = eval_expr(right, ctx)
            return apply_binary(op, lv, rv)
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: A.Expression, ctx: EvalContext) -> A.Value:
    """Evaluate ``e`` to a value; never mutates ``ctx``."""
    try:
        return eval_expr(e, ctx)
    except RecursionError:
        raise FlangRuntimeError("expression nested too deeply") from None
