"""Pretty printer producing surface syntax that parses back to the same tree."""

from __future__ import annotations

from . import ast as A

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6}

INDENT = "  "


def format_expression(e: A.Expression) -> str:
    match e:
        case A.Lit(value):
            return A.render_value(value)
        case A.Var(name):
            return name
        case A.AutomatonState(inst):
            return "#" + inst
        case A.PacketField(name):
            return "pkt." + name
        case A.ArrivalTime():
            return "arrivalTime"
        case A.ArrivalPort():
            return "arrivalPort"
        case A.Unary(op, operand):
            inner = format_expression(operand)
            # "-3" would parse back as a negative literal, not a negation
            if isinstance(operand, A.Binary) or (
                    op == "-" and isinstance(operand, A.Lit)
                    and isinstance(operand.value, A.Int) and operand.value.value >= 0):
                inner = f"({inner})"
            return op + inner
        case A.Binary(op, left, right):
            prec = _PREC[op]
            l = format_expression(left)
            r = format_expression(right)
            if isinstance(left, A.Binary) and _PREC[left.op] < prec:
                l = f"({l})"
            if isinstance(right, A.Binary) and _PREC[right.op] <= prec:
                r = f"({r})"
            return f"{l} {op} {r}"
    raise TypeError(f"not an expression: {e!r}")


def _spine(s: A.Statement) -> list[A.Statement]:
    out = []
    while isinstance(s, A.Seq):
        out.append(s.first)
        s = s.second
    out.append(s)
    return out


def _block_lines(body: A.Statement, depth: int) -> list[str]:
    lines = []
    for s in _spine(body):
        lines.extend(_statement_lines(s, depth))
    return lines


def _braced(head: str, body: A.Statement, depth: int, tail="") -> list[str]:
    pad = INDENT * depth
    return ([f"{pad}{head}{{"] + _block_lines(body, depth + 1)
            + [f"{pad}}}{tail}"])


def _statement_lines(s: A.Statement, depth: int) -> list[str]:
    pad = INDENT * depth
    match s:
        case A.Seq():
            # left-nested sequence: keep its shape with a nested block
            return _braced("", s, depth)
        case A.Cond(guard, body):
            return _braced(f"cond ({format_expression(guard)}) ", body, depth)
        case A.Iter(count, body):
            return _braced(f"iter ({format_expression(count)}) ", body, depth)
        case A.NewInterrupt(at, period, body):
            args = format_expression(at)
            if period is not None:
                args += ", period " + format_expression(period)
            return _braced(f"newInterrupt ({args}) ", body, depth)
        case A.Step(inst, event, on_fail):
            return _braced(f"step #{inst} : '{event.name} else ", on_fail, depth, ";")
    return [pad + format_command(s) + ";"]


def format_command(c: A.Command) -> str:
    match c:
        case A.Nop():
            return "nop"
        case A.Accept():
            return "accept"
        case A.Drop():
            return "drop"
        case A.Send(port, fields):
            body = ", ".join(f"{k} = {format_expression(v)}" for k, v in fields)
            return f"send({port.value}, {{ {body} }})"
        case A.Alarm(msg):
            return f"alarm({format_expression(msg)})"
        case A.Set(var, value):
            return f"set {var} = {format_expression(value)}"
        case A.NewAutomaton(inst, kind):
            return f"newAutomaton #{inst} = {kind}"
    raise TypeError(f"not a one-line command: {c!r}")


def format_statement(s: A.Statement, depth=0) -> str:
    return "\n".join(_statement_lines(s, depth))


def pretty_print(p: A.Program) -> str:
    """Render a program as FLang source.

    A program whose filter is a single command prints on one line
    (``FILTER { nop; }``); anything larger is laid out one statement per line.
    """
    parts = []
    for item in p.prologue:
        if isinstance(item, A.AutomatonKindDef):
            lines = [f"AUTOMATON {item.kind} {{", f"{INDENT}init: '{item.initial.name};"]
            lines += [f"{INDENT}'{t.source.name} -'{t.event.name}-> '{t.target.name};"
                      for t in item.transitions]
            lines.append("}")
            parts.append("\n".join(lines))
        else:
            parts.append("\n".join(_braced("INIT ", item.body, 0)))
    body = _block_lines(p.filter, 1)
    if len(body) == 1:
        parts.append(f"FILTER {{ {body[0].strip()} }}")
    else:
        parts.append("\n".join(["FILTER {"] + body + ["}"]))
    return "\n\n".join(parts)
