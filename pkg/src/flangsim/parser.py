"""Lexer and recursive-descent parser for FLang surface syntax.

Grammar (the concrete tokens are this package's own)::

    Program      := PrologueItem* "FILTER" Block
    PrologueItem := "AUTOMATON" Id "{" "init" ":" Sym ";" (Sym "-" Sym "->" Sym ";")* "}"
                  | "INIT" Block
    Block        := "{" Stmt+ "}"
    Stmt         := Cmd ";"
                  | "cond" "(" Expr ")" Block
                  | "iter" "(" Expr ")" Block
                  | "newInterrupt" "(" Expr ["," "period" Expr] ")" Block
                  | Block
    Cmd          := "nop" | "accept" | "drop"
                  | "send" "(" Port "," "{" Id "=" Expr ("," Id "=" Expr)* "}" ")"
                  | "alarm" "(" Expr ")"
                  | "set" Id "=" Expr
                  | "newAutomaton" AutId "=" Id
                  | "step" AutId ":" Sym "else" Block

Symbols are written ``'Name``, automaton instances ``#Name``; ``//`` starts
a comment.  Statements in a block nest to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast as A
from .errors import DuplicateKind, DuplicateTransition, ParseError

KEYWORDS = frozenset({
    "AUTOMATON", "INIT", "FILTER", "cond", "iter", "newInterrupt", "period",
    "nop", "accept", "drop", "send", "alarm", "set", "newAutomaton", "step",
    "else", "init", "left", "right", "true", "false", "pkt", "arrivalTime",
    "arrivalPort",
})

PUNCT = ("->", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";",
         ":", ",", "=", "<", ">", "+", "-", "*", "/", "!", ".")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}

MAX_NESTING = 64


@dataclass(frozen=True)
class Token:
    kind: str      # "int", "string", "sym", "autid", "id", "eof", or the keyword/punct itself
    text: str
    value: object
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


_KIND_NAMES = {"int": "integer", "string": "string", "sym": "symbol",
               "autid": "automaton id", "id": "identifier"}


def _describe_kind(kind: str) -> str:
    return _KIND_NAMES.get(kind, repr(kind))


def tokenize(src: str) -> list[Token]:
    tokens = []
    i, line, line_start = 0, 1, 0
    n = len(src)
    while True:
        while i < n:
            c = src[i]
            if c == "\n":
                line += 1
                line_start = i + 1
                i += 1
            elif c in " \t\r\f\v":
                i += 1
            elif src.startswith("//", i):
                while i < n and src[i] != "\n":
                    i += 1
            else:
                break
        col = i - line_start + 1
        if i >= n:
            tokens.append(Token("eof", "", None, line, col))
            return tokens
        c = src[i]
        if c.isascii() and c.isdigit():
            j = i
            while j < n and src[j].isascii() and src[j].isdigit():
                j += 1
            text = src[i:j]
            tokens.append(Token("int", text, int(text), line, col))
            i = j
            continue
        m = _IDENT.match(src, i)
        if m:
            text = m.group()
            kind = text if text in KEYWORDS else "id"
            tokens.append(Token(kind, text, text, line, col))
            i = m.end()
            continue
        if c in "'#":
            m = _IDENT.match(src, i + 1)
            if not m:
                raise ParseError(line, col + 1, f"identifier must follow {c!r}",
                                 {"identifier"})
            kind = "sym" if c == "'" else "autid"
            tokens.append(Token(kind, src[i:m.end()], m.group(), line, col))
            i = m.end()
            continue
        if c == '"':
            j = i + 1
            chars = []
            while True:
                if j >= n or src[j] == "\n":
                    raise ParseError(line, col, "unterminated string literal")
                if src[j] == '"':
                    break
                if src[j] == "\\":
                    esc = src[j + 1] if j + 1 < n else ""
                    if esc not in _ESCAPES:
                        raise ParseError(line, j - line_start + 1,
                                         f"bad escape \\{esc}")
                    chars.append(_ESCAPES[esc])
                    j += 2
                else:
                    chars.append(src[j])
                    j += 1
            tokens.append(Token("string", src[i:j + 1], "".join(chars), line, col))
            i = j + 1
            continue
        for p in PUNCT:
            if src.startswith(p, i):
                tokens.append(Token(p, p, p, line, col))
                i += len(p)
                break
        else:
            raise ParseError(line, col, f"unexpected character {c!r}")


_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/"),
)


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0
        self.depth = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, expected, message=None) -> ParseError:
        tok = self.tok
        expected = {_describe_kind(k) for k in expected}
        if message is None:
            message = f"unexpected {tok.describe()}"
        return ParseError(tok.line, tok.col, message, expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error({kind})
        return self.advance()

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.advance()
            return True
        return False

    def word(self) -> Token:
        """Identifier or keyword; used where names cannot clash (field names)."""
        if self.tok.kind == "id" or self.tok.kind in KEYWORDS:
            return self.advance()
        raise self.error({"id"})

    def nest(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError(self.tok.line, self.tok.col, "nesting too deep")

    # -- programs

    def program(self) -> A.Program:
        prologue = []
        kinds = set()
        while self.tok.kind in ("AUTOMATON", "INIT"):
            if self.tok.kind == "INIT":
                loc = self.loc()
                self.advance()
                prologue.append(A.InitBlock(self.block(), loc=loc))
            else:
                item = self.automaton()
                if item.kind in kinds:
                    raise DuplicateKind(f"automaton kind {item.kind} defined twice",
                                        item.loc)
                kinds.add(item.kind)
                prologue.append(item)
        if self.tok.kind != "FILTER":
            raise self.error({"AUTOMATON", "INIT", "FILTER"})
        self.advance()
        body = self.block()
        if self.tok.kind != "eof":
            raise self.error({"eof"}, f"unexpected {self.tok.describe()} after filter")
        return A.Program(tuple(prologue), body)

    def loc(self) -> A.Loc:
        return (self.tok.line, self.tok.col)

    def automaton(self) -> A.AutomatonKindDef:
        loc = self.loc()
        self.expect("AUTOMATON")
        kind = self.expect("id").value
        self.expect("{")
        self.expect("init")
        self.expect(":")
        initial = A.Symbol(self.expect("sym").value)
        self.expect(";")
        transitions = []
        seen = set()
        while self.tok.kind != "}":
            if self.tok.kind != "sym":
                raise self.error({"sym", "}"})
            tloc = self.loc()
            source = A.Symbol(self.advance().value)
            self.expect("-")
            event = A.Symbol(self.expect("sym").value)
            self.expect("->")
            target = A.Symbol(self.expect("sym").value)
            self.expect(";")
            if (source, event) in seen:
                raise DuplicateTransition(
                    f"kind {kind} has two transitions from '{source.name} on '{event.name}",
                    tloc)
            seen.add((source, event))
            transitions.append(A.Transition(source, event, target))
        self.advance()
        return A.AutomatonKindDef(kind, initial, tuple(transitions), loc=loc)

    # -- statements

    def block(self) -> A.Statement:
        self.expect("{")
        self.nest()
        stmts = [self.statement()]
        while self.tok.kind != "}":
            stmts.append(self.statement())
        self.advance()
        self.depth -= 1
        return A.seq(*stmts)

    def statement(self) -> A.Statement:
        loc = self.loc()
        kind = self.tok.kind
        if kind in ("cond", "iter"):
            self.advance()
            self.expect("(")
            e = self.expression()
            self.expect(")")
            body = self.block()
            cls = A.Cond if kind == "cond" else A.Iter
            return cls(e, body, loc=loc)
        if kind == "newInterrupt":
            self.advance()
            self.expect("(")
            at = self.expression()
            period = None
            if self.accept(","):
                self.expect("period")
                period = self.expression()
            self.expect(")")
            return A.NewInterrupt(at, period, self.block(), loc=loc)
        if kind == "{":
            return self.block()
        cmd = self.command()
        self.expect(";")
        return cmd

    def command(self) -> A.Command:
        loc = self.loc()
        kind = self.tok.kind
        if kind == "nop":
            self.advance()
            return A.Nop(loc=loc)
        if kind == "accept":
            self.advance()
            return A.Accept(loc=loc)
        if kind == "drop":
            self.advance()
            return A.Drop(loc=loc)
        if kind == "send":
            self.advance()
            self.expect("(")
            port = self.port()
            self.expect(",")
            self.expect("{")
            fields = []
            names = set()
            while True:
                name_tok = self.word()
                if name_tok.value in names:
                    raise ParseError(name_tok.line, name_tok.col,
                                     f"duplicate field {name_tok.value}")
                names.add(name_tok.value)
                self.expect("=")
                fields.append((name_tok.value, self.expression()))
                if not self.accept(","):
                    break
            self.expect("}")
            self.expect(")")
            return A.Send(port, tuple(fields), loc=loc)
        if kind == "alarm":
            self.advance()
            self.expect("(")
            e = self.expression()
            self.expect(")")
            return A.Alarm(e, loc=loc)
        if kind == "set":
            self.advance()
            name = self.expect("id").value
            self.expect("=")
            return A.Set(name, self.expression(), loc=loc)
        if kind == "newAutomaton":
            self.advance()
            inst = self.expect("autid").value
            self.expect("=")
            return A.NewAutomaton(inst, self.expect("id").value, loc=loc)
        if kind == "step":
            self.advance()
            inst = self.expect("autid").value
            self.expect(":")
            event = A.Symbol(self.expect("sym").value)
            self.expect("else")
            return A.Step(inst, event, self.block(), loc=loc)
        raise self.error({"nop", "accept", "drop", "send", "alarm", "set",
                          "newAutomaton", "step", "cond", "iter",
                          "newInterrupt", "{"})

    def port(self) -> A.Port:
        if self.accept("left"):
            return A.Port.LEFT
        if self.accept("right"):
            return A.Port.RIGHT
        raise self.error({"left", "right"})

    # -- expressions

    def expression(self, level=0) -> A.Expression:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        left = self.expression(level + 1)
        while self.tok.kind in ops:
            loc = self.loc()
            op = self.advance().kind
            right = self.expression(level + 1)
            left = A.Binary(op, left, right, loc=loc)
        return left

    def unary(self) -> A.Expression:
        loc = self.loc()
        if self.tok.kind == "-" and self.peek().kind == "int":
            self.advance()
            return A.Lit(A.Int(self.int_literal(negate=True)), loc=loc)
        if self.tok.kind in A.UNARY_OPS:
            op = self.advance().kind
            self.nest()
            operand = self.unary()
            self.depth -= 1
            return A.Unary(op, operand, loc=loc)
        return self.primary()

    def int_literal(self, negate=False) -> int:
        tok = self.expect("int")
        v = -tok.value if negate else tok.value
        if not A.INT64_MIN <= v <= A.INT64_MAX:
            raise ParseError(tok.line, tok.col, "integer literal out of 64-bit range")
        return v

    def primary(self) -> A.Expression:
        loc = self.loc()
        tok = self.tok
        match tok.kind:
            case "int":
                return A.Lit(A.Int(self.int_literal()), loc=loc)
            case "string":
                self.advance()
                return A.Lit(A.Text(tok.value), loc=loc)
            case "sym":
                self.advance()
                return A.Lit(A.Symbol(tok.value), loc=loc)
            case "true" | "false":
                self.advance()
                return A.Lit(A.Bool(tok.kind == "true"), loc=loc)
            case "left" | "right":
                return A.Lit(self.port(), loc=loc)
            case "id":
                self.advance()
                return A.Var(tok.value, loc=loc)
            case "autid":
                self.advance()
                return A.AutomatonState(tok.value, loc=loc)
            case "pkt":
                self.advance()
                self.expect(".")
                return A.PacketField(self.word().value, loc=loc)
            case "arrivalTime":
                self.advance()
                return A.ArrivalTime(loc=loc)
            case "arrivalPort":
                self.advance()
                return A.ArrivalPort(loc=loc)
            case "(":
                self.advance()
                self.nest()
                e = self.expression()
                self.depth -= 1
                self.expect(")")
                return e
        raise self.error({"int", "string", "sym", "id", "autid", "true", "false",
                          "left", "right", "pkt", "arrivalTime", "arrivalPort",
                          "(", "-", "!"})


def parse_program(src: str) -> A.Program:
    """Parse FLang program text.

    Raises ParseError on syntax errors, DuplicateKind / DuplicateTransition
    on ill-formed automaton definitions.
    """
    return Parser(src).program()


def parse_expression(src: str) -> A.Expression:
    p = Parser(src)
    e = p.expression()
    if p.tok.kind != "eof":
        raise p.error({"eof"}, f"unexpected {p.tok.describe()} after expression")
    return e
