"""Parser for the textual formula syntax used on the command line.

    phi  ::= "T" | term "=" term | phi "&" phi | phi "->" phi
           | ("exists" | "forall") ident ":" set "." phi
           | rel "(" term, ... ")" | "Rel" "(" rel ";" term, ... ")" | "(" phi ")"
    term ::= ident | map "(" term ")"

``&`` binds tighter than ``->``, which associates to the right; a
quantifier's body extends as far as possible.
"""
from __future__ import annotations

import re

from .bhk import And, App, Eq, Exists, Forall, Formula, Implies, Rel, Term, Truth, Var
from .errors import FormulaSyntaxError

_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_']*)|([()=&,;:.]))")


def tokenize(text: str) -> list[tuple[str, int]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r} at column {bad + 1}")
        tok = m.group(1) or m.group(2) or m.group(3)
        out.append((tok, m.start(m.lastindex) + 1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, sets: dict, maps: dict, relations: dict):
        self.toks = tokenize(text)
        self.i = 0
        self.sets, self.maps, self.relations = sets, maps, relations

    def peek(self, k: int = 0) -> str | None:
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def col(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else -1

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError(f"unexpected end of formula; expected {want or 'more input'}")
        if want is not None and tok != want:
            raise FormulaSyntaxError(f"expected {want!r} at column {self.col()}, found {tok!r}")
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula; expected a name")
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise FormulaSyntaxError(f"expected a name at column {self.col()}, found {tok!r}")
        return self.take()

    def formula(self) -> Formula:
        left = self.conj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in ("exists", "forall"):
            self.take()
            var = self.ident()
            self.take(":")
            set_name = self.ident()
            if set_name not in self.sets:
                raise FormulaSyntaxError(f"unknown set {set_name!r}")
            self.take(".")
            body = self.formula()
            cls = Exists if tok == "exists" else Forall
            return cls(var, self.sets[set_name], body, set_name)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "T" and self.peek(1) != "(":
            self.take()
            return Truth()
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok == "Rel" and self.peek(1) == "(" and "Rel" not in self.maps:
            self.take()
            self.take("(")
            name = self.ident()
            self.take(";")
            return self.rel_args(name)
        start = self.i
        if tok in self.relations and self.peek(1) == "(":
            if tok in self.maps:
                self.term()
                if self.peek() == "=":
                    self.i = start
                    return self.equation()
                self.i = start
            self.take()
            self.take("(")
            return self.rel_args(tok)
        return self.equation()

    def rel_args(self, name: str) -> Formula:
        if name not in self.relations:
            raise FormulaSyntaxError(f"unknown relation {name!r}")
        args = [self.term()]
        while self.peek() == ",":
            self.take()
            args.append(self.term())
        self.take(")")
        return Rel(self.relations[name], tuple(args), name)

    def equation(self) -> Formula:
        lhs = self.term()
        self.take("=")
        return Eq(lhs, self.term())

    def term(self) -> Term:
        name = self.ident()
        if self.peek() == "(":
            if name not in self.maps:
                raise FormulaSyntaxError(f"unknown map {name!r}")
            self.take("(")
            arg = self.term()
            self.take(")")
            return App(self.maps[name], arg, name)
        return Var(name)


def parse_formula(text: str, sets: dict | None = None, maps: dict | None = None,
                  relations: dict | None = None) -> Formula:
    """Parse against named sets, maps (FiniteMap) and relations (Span)."""
    p = _Parser(text, sets or {}, maps or {}, relations or {})
    if not p.toks:
        raise FormulaSyntaxError("empty formula")
    phi = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError(f"unexpected {p.peek()!r} at column {p.col()}")
    return phi


def parse_context(text: str, sets: dict) -> list:
    """``"x:X, y:Y"`` to a list of (variable, FiniteSet)."""
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        var, _, set_name = (s.strip() for s in part.partition(":"))
        if not var or set_name not in sets:
            raise FormulaSyntaxError(f"bad context entry {part!r}")
        out.append((var, sets[set_name]))
    return out
