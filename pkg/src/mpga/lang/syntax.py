"""Lexer and LL(1) parser for ``.mpga`` scripts.

Grammar (lowest to highest precedence)::

    script  := stmt ((NEWLINE | ';') stmt)*
    stmt    := ε | 'print' expr | NAME '=' expr | expr
    sum     := join (('+' | '-') join)*
    join    := outer ('&' outer)*
    outer   := term (('^' | '.' | 'x') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+' | '~') unary | primary
    primary := NUMBER | BLADE | NAME | NAME '(' args ')' | '(' sum (',' sum)* ')'

``x`` (commutator) and ``print`` are reserved.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..algebra import SPACES

KEYWORDS = {"x", "print"}
_ALIASES = {"∧": "^", "·": ".", "∨": "&", "×": "x", "−": "-"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^.&~(),=;]|[∧·∨×−])
    """,
    re.VERBOSE,
)
_BLADE = re.compile(r"e\d+")


class ScriptError(Exception):
    """Parse-time diagnostic; ``kind`` is E-LEX, E-SYNTAX, E-NAME or E-ARITY."""

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {kind}: {message}")
        self.kind = kind
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Tok:
    kind: str  # number, name, blade, op, kw, sep, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out: list[Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ScriptError("E-LEX", f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind == "newline":
            out.append(Tok("sep", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "number":
            # reject things like 12abc or 1.5e3 (exponent needs a sign)
            nxt = text[m.end() : m.end() + 1]
            if nxt and (nxt.isalnum() or nxt == "_"):
                raise ScriptError("E-LEX", f"malformed number near {s + nxt!r}", line, col)
            out.append(Tok("number", s, line, col))
        elif kind == "name":
            if s in KEYWORDS:
                out.append(Tok("kw" if s == "print" else "op", s, line, col))
            elif _BLADE.fullmatch(s):
                out.append(Tok("blade", s, line, col))
            else:
                out.append(Tok("name", s, line, col))
        elif kind == "op":
            s = _ALIASES.get(s, s)
            out.append(Tok("sep" if s == ";" else "op", s, line, col))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: float
    pos: tuple[int, int]


@dataclass(frozen=True)
class Blade:
    name: str
    pos: tuple[int, int]


@dataclass(frozen=True)
class Name:
    name: str
    pos: tuple[int, int]


@dataclass(frozen=True)
class UndefinedLit:
    reason: str
    pos: tuple[int, int]


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"
    pos: tuple[int, int]


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple[int, int]


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]
    pos: tuple[int, int]


@dataclass(frozen=True)
class TupleLit:
    items: tuple["Expr", ...]
    pos: tuple[int, int]


Expr = Union[Num, Blade, Name, UndefinedLit, Unary, Binary, Call, TupleLit]


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Expr
    pos: tuple[int, int]


@dataclass(frozen=True)
class Print:
    expr: Expr
    pos: tuple[int, int]


@dataclass
class Script:
    statements: list[Union[Assign, Print]] = field(default_factory=list)
    space: str | None = None


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, toks: list[Tok], arity, constants, space):
        self.toks = toks
        self.i = 0
        self.arity = arity
        self.constants = constants
        self.space = space
        self.bound: set[str] = set()

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def advance(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Tok | None = None, kind: str = "E-SYNTAX"):
        t = tok or self.tok
        raise ScriptError(kind, msg, t.line, t.col)

    def expect(self, kind: str, text: str | None = None) -> Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text else kind
            self.fail(f"expected {want}, got {_describe(t)}")
        return self.advance()

    def script(self) -> Script:
        sc = Script(space=self.space)
        while self.tok.kind != "eof":
            if self.tok.kind == "sep":
                self.advance()
                continue
            sc.statements.append(self.statement())
            if self.tok.kind not in ("sep", "eof"):
                self.fail(f"unexpected {_describe(self.tok)} after statement")
        return sc

    def statement(self):
        t = self.tok
        if t.kind == "kw":
            self.advance()
            return Print(self.sum(), (t.line, t.col))
        if t.kind == "name" and self.toks[self.i + 1].text == "=" and self.toks[self.i + 1].kind == "op":
            name = t.text
            if name in self.arity or name in self.constants:
                self.fail(f"cannot rebind built-in name {name!r}", t, "E-NAME")
            if name in self.bound:
                self.fail(f"{name!r} is already bound (single assignment)", t, "E-NAME")
            self.advance()
            self.advance()
            expr = self.sum()
            self.bound.add(name)
            return Assign(name, expr, (t.line, t.col))
        return Print(self.sum(), (t.line, t.col))

    def _binary(self, sub, ops):
        left = sub()
        while self.tok.kind == "op" and self.tok.text in ops:
            t = self.advance()
            left = Binary(t.text, left, sub(), (t.line, t.col))
        return left

    def sum(self):
        return self._binary(self.join, ("+", "-"))

    def join(self):
        return self._binary(self.outer, ("&",))

    def outer(self):
        return self._binary(self.term, ("^", ".", "x"))

    def term(self):
        return self._binary(self.unary, ("*", "/"))

    def unary(self):
        t = self.tok
        if t.kind == "op" and t.text in ("-", "+", "~"):
            self.advance()
            return Unary(t.text, self.unary(), (t.line, t.col))
        return self.primary()

    def primary(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "number":
            self.advance()
            return Num(float(t.text), pos)
        if t.kind == "blade":
            self.advance()
            if self.space is not None:
                _check_blade(t, self.space)
            return Blade(t.text, pos)
        if t.kind == "name":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(t)
            if t.text in self.constants or t.text in self.bound:
                return Name(t.text, pos)
            if t.text in self.arity:
                self.fail(f"{t.text!r} is a function; call it with arguments", t, "E-NAME")
            self.fail(f"unknown name {t.text!r}", t, "E-NAME")
        if t.kind == "op" and t.text == "(":
            self.advance()
            items = [self.sum()]
            while self.tok.kind == "op" and self.tok.text == ",":
                self.advance()
                items.append(self.sum())
            self.expect("op", ")")
            return items[0] if len(items) == 1 else TupleLit(tuple(items), pos)
        self.fail(f"expected an expression, got {_describe(t)}")

    def call(self, name_tok: Tok):
        name = name_tok.text
        pos = (name_tok.line, name_tok.col)
        if name not in self.arity:
            self.fail(f"unknown function {name!r}", name_tok, "E-NAME")
        self.expect("op", "(")
        if name == "undefined":
            reason = self.expect("name").text
            self.expect("op", ")")
            return UndefinedLit(reason, pos)
        args = []
        if not (self.tok.kind == "op" and self.tok.text == ")"):
            args.append(self.sum())
            while self.tok.kind == "op" and self.tok.text == ",":
                self.advance()
                args.append(self.sum())
        self.expect("op", ")")
        allowed = self.arity[name]
        if len(args) not in allowed:
            want = " or ".join(str(k) for k in sorted(allowed))
            self.fail(f"{name}() takes {want} argument(s), got {len(args)}", name_tok, "E-ARITY")
        return Call(name, tuple(args), pos)


def _describe(t: Tok) -> str:
    if t.kind == "eof":
        return "end of input"
    if t.text == "\n":
        return "end of line"
    return repr(t.text)


def _check_blade(t: Tok, space: str) -> None:
    n = SPACES[space].n
    idx = t.text[1:]
    if len(set(idx)) != len(idx) or any(int(ch) >= n for ch in idx):
        raise ScriptError("E-LEX", f"{t.text} is not a basis blade of {space}", t.line, t.col)


def parse(text: str, space: str | None = None) -> Script:
    """Parse script text; ``space`` (``M2``/``M3``/``M4``) enables blade and
    arity checks that depend on the dimension."""
    from .evaluator import CONSTANTS, arity_table

    if space is not None:
        space = space.upper()
        if space not in SPACES:
            raise ValueError(f"unknown space {space!r}")
    toks = tokenize(text)
    return _Parser(toks, arity_table(space), CONSTANTS, space).script()
