import pytest
from hypothesis import given
from hypothesis import strategies as st

from flangsim import ast as A
from flangsim.errors import (DivisionByZero, FlangArithmeticError, FlangTypeError,
                             NoPacketContext, UndefinedVariable, UnknownAutomaton,
                             UnknownField)
from flangsim.evaluator import EvalContext, apply_binary, apply_unary, evaluate
from flangsim.parser import parse_expression

I, B, S = A.Int, A.Bool, A.Symbol


def ev(src, **ctx):
    return evaluate(parse_expression(src), EvalContext(**ctx))


def packet_ctx(**fields):
    return dict(has_packet=True, fields=fields, time=10, port=A.Port.LEFT)


def test_addition():
    assert evaluate(A.Binary("+", A.Lit(I(2)), A.Lit(I(3))), EvalContext()) == I(5)


def test_automaton_state():
    assert ev("#A", automata={"A": ("DhcpK", S("S2"))}) == S("S2")


def test_packet_field_comparison():
    assert ev("pkt.client == 3", **packet_ctx(client=I(3))) == B(True)


def test_packet_access_outside_packet_frame():
    for src in ("pkt.client", "arrivalTime", "arrivalPort"):
        with pytest.raises(NoPacketContext):
            ev(src)


def test_arrival_time_and_port():
    assert ev("arrivalTime + 1", **packet_ctx()) == I(11)
    assert ev("arrivalPort == left", **packet_ctx()) == B(True)


@pytest.mark.parametrize("op, l, r, out", [
    ("==", S("S0"), S("S0"), B(True)),
    ("==", S("S0"), S("S1"), B(False)),
    ("!=", A.Port.LEFT, A.Port.RIGHT, B(True)),
    ("&&", B(True), B(False), B(False)),
    ("||", B(False), B(True), B(True)),
    ("<=", I(3), I(3), B(True)),
    ("*", I(-4), I(5), I(-20)),
])
def test_apply_binary(op, l, r, out):
    assert apply_binary(op, l, r) == out


@pytest.mark.parametrize("op, l, r", [
    ("+", I(1), B(True)),
    ("==", I(1), B(True)),
    ("==", S("left"), A.Port.LEFT),
    ("&&", I(1), B(True)),
    ("<", S("a"), S("b")),
])
def test_sort_mismatch(op, l, r):
    with pytest.raises(FlangTypeError):
        apply_binary(op, l, r)


def test_unary():
    assert apply_unary("-", I(4)) == I(-4)
    assert apply_unary("!", B(False)) == B(True)
    with pytest.raises(FlangTypeError):
        apply_unary("!", I(0))


def test_no_short_circuit():
    with pytest.raises(UnknownField):
        ev("false && pkt.missing", **packet_ctx())
    with pytest.raises(UndefinedVariable):
        ev("true || y")


def test_lookup_errors():
    with pytest.raises(UndefinedVariable):
        ev("x + 1")
    with pytest.raises(UnknownAutomaton):
        ev("#B == 'S0")


def test_division_truncates_toward_zero():
    assert apply_binary("/", I(7), I(2)) == I(3)
    assert apply_binary("/", I(-7), I(2)) == I(-3)
    assert apply_binary("/", I(7), I(-2)) == I(-3)
    assert apply_binary("/", I(-7), I(-2)) == I(3)
    with pytest.raises(DivisionByZero):
        apply_binary("/", I(1), I(0))


def test_overflow():
    with pytest.raises(FlangArithmeticError):
        apply_binary("+", I(A.INT64_MAX), I(1))
    with pytest.raises(FlangArithmeticError):
        apply_unary("-", I(A.INT64_MIN))
    with pytest.raises(FlangArithmeticError):
        apply_binary("/", I(A.INT64_MIN), I(-1))


def test_context_is_not_mutated():
    ctx = EvalContext(vars={"x": I(1)})
    evaluate(parse_expression("x + x"), ctx)
    assert dict(ctx.vars) == {"x": I(1)}


int64 = st.integers(A.INT64_MIN, A.INT64_MAX)


@given(int64, int64.filter(lambda b: b != 0))
def test_division_matches_reference(a, b):
    # independent reference: C-style truncation via float-free arithmetic
    q = int(a / b) if abs(a) < 2**52 and abs(b) < 2**52 else None
    expected = abs(a) // abs(b) * (1 if (a >= 0) == (b >= 0) else -1)
    if q is not None:
        assert expected == q
    if A.INT64_MIN <= expected <= A.INT64_MAX:
        assert apply_binary("/", I(a), I(b)) == I(expected)
