"""Presubobjects and the proof-relevant interpretation of regular logic
extended with implication and universal quantification.

A formula in a typed context is interpreted as an arrow into the product of
the context's types. The apex of that arrow carries the evidence: weak
equalisers for equality, weak pullbacks for conjunction and atoms,
postcomposition for ``exists`` and full families for ``forall`` and ``->``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import BoundaryError, ElementError, FormulaTypeError, InternalInconsistency
from .finset import FiniteMap, FiniteSet, ProductN, compose, identity, product_many
from .weaklim import (
    MINIMAL,
    Span,
    Strategy,
    factor_through,
    factor_through_search,
    weak_equalizer,
    weak_pullback,
)


@dataclass(frozen=True, eq=False)
class Presubobject:
    target: FiniteSet
    rep: FiniteMap

    def __post_init__(self):
        if self.rep.cod != self.target:
            raise BoundaryError("representative must land in the target")

    @property
    def apex(self) -> FiniteSet:
        return self.rep.dom

    def elements(self) -> frozenset[int]:
        return self.rep.image()

    def element_labels(self) -> list[str]:
        img = self.rep.image()
        return [x for i, x in enumerate(self.target) if i in img]

    def __repr__(self):
        return f"Presubobject(apex={len(self.apex)}, elements={self.element_labels()})"


def top(X: FiniteSet) -> Presubobject:
    return Presubobject(X, identity(X))


def psub_leq(a: Presubobject, b: Presubobject, audit: bool = False) -> bool:
    """``a <= b``: some ``h`` with ``b.rep . h = a.rep``.

    The factorisation is checked against the element test every time; with
    ``audit`` it is also checked against brute force over all maps.
    """
    if a.target != b.target:
        raise BoundaryError(f"presubobjects over different targets: {a.target!r} vs {b.target!r}")
    h = factor_through(a.rep, b.rep)
    found = h is not None
    if found != (a.elements() <= b.elements()):
        raise InternalInconsistency("factorisation and element test disagree")
    if audit and found != (factor_through_search(a.rep, b.rep) is not None):
        raise InternalInconsistency("pointwise and exhaustive factorisation searches disagree")
    return found


def psub_equiv(a: Presubobject, b: Presubobject) -> bool:
    return psub_leq(a, b) and psub_leq(b, a)


def element_satisfies(p: Presubobject, x: str) -> bool:
    return p.target.index(x) in p.rep.image()


# -- syntax -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: FiniteMap
    arg: "Term"
    name: str = "f"

    def __str__(self):
        return f"{self.name}({self.arg})"


Term = Union[Var, App]


@dataclass(frozen=True)
class Truth:
    def __str__(self):
        return "T"


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    type: FiniteSet
    body: "Formula"
    type_name: str = "Y"

    def __str__(self):
        return f"(exists {self.var}:{self.type_name}. {self.body})"


@dataclass(frozen=True)
class Forall:
    var: str
    type: FiniteSet
    body: "Formula"
    type_name: str = "Y"

    def __str__(self):
        return f"(forall {self.var}:{self.type_name}. {self.body})"


@dataclass(frozen=True)
class Rel:
    """Atom asserting that the argument tuple lies in the image of a span."""

    span: Span
    args: tuple
    name: str = "R"

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


Formula = Union[Truth, Eq, And, Implies, Exists, Forall, Rel]

Context = Sequence[tuple[str, FiniteSet]]


class _Ctx:
    def __init__(self, context: Context):
        self.entries = list(context)
        self.prod: ProductN = product_many([t for _, t in self.entries])

    @property
    def obj(self) -> FiniteSet:
        return self.prod.obj

    def extend(self, name: str, typ: FiniteSet) -> "_Ctx":
        return _Ctx(self.entries + [(name, typ)])

    def lookup(self, name: str) -> int:
        for pos in range(len(self.entries) - 1, -1, -1):
            if self.entries[pos][0] == name:
                return pos
        raise FormulaTypeError(f"unbound variable {name!r}")

    def term(self, t: Term) -> FiniteMap:
        if isinstance(t, Var):
            return self.prod.projections[self.lookup(t.name)]
        if isinstance(t, App):
            inner = self.term(t.arg)
            if inner.cod != t.fn.dom:
                raise FormulaTypeError(
                    f"ill-typed term {t}: {t.name} expects {t.fn.dom!r}, argument {t.arg} has type {inner.cod!r}")
            return compose(t.fn, inner)
        raise FormulaTypeError(f"not a term: {t!r}")

    def term_type(self, t: Term) -> FiniteSet:
        if isinstance(t, Var):
            return self.entries[self.lookup(t.name)][1]
        if isinstance(t, App):
            if self.term_type(t.arg) != t.fn.dom:
                raise FormulaTypeError(f"ill-typed term {t}")
            return t.fn.cod
        raise FormulaTypeError(f"not a term: {t!r}")

    def drop_last(self) -> FiniteMap:
        """Projection from this context onto the context without its last variable."""
        shorter = _Ctx(self.entries[:-1])
        if not shorter.entries:
            return FiniteMap(self.obj, shorter.obj, [0] * len(self.obj))
        return shorter.prod.tuple_map(list(self.prod.projections[:-1]))


def context_object(context: Context) -> FiniteSet:
    return _Ctx(context).obj


def interpret(phi: Formula, context: Context, strategy: Strategy = MINIMAL) -> Presubobject:
    """Presubobject of the context object interpreting ``phi``."""
    return _interp(phi, _Ctx(context), strategy)


def _interp(phi: Formula, ctx: _Ctx, strategy: Strategy) -> Presubobject:
    C = ctx.obj
    if isinstance(phi, Truth):
        return top(C)
    if isinstance(phi, Eq):
        s, t = ctx.term(phi.lhs), ctx.term(phi.rhs)
        if s.cod != t.cod:
            raise FormulaTypeError(
                f"ill-typed equation {phi}: sides have types {s.cod!r} and {t.cod!r}")
        _, e = weak_equalizer(s, t, strategy)
        return Presubobject(C, e)
    if isinstance(phi, Rel):
        if len(phi.args) != len(phi.span.legs):
            raise FormulaTypeError(
                f"ill-typed atom {phi}: {phi.name} has arity {len(phi.span.legs)}")
        maps = [ctx.term(a) for a in phi.args]
        for a, m, foot in zip(phi.args, maps, phi.span.feet):
            if m.cod != foot:
                raise FormulaTypeError(
                    f"ill-typed atom {phi}: argument {a} has type {m.cod!r}, expected {foot!r}")
        feet = product_many(list(phi.span.feet))
        w = weak_pullback(feet.tuple_map(maps), feet.tuple_map(list(phi.span.legs)), strategy)
        return Presubobject(C, w.left)
    if isinstance(phi, And):
        a, b = _interp(phi.left, ctx, strategy), _interp(phi.right, ctx, strategy)
        w = weak_pullback(a.rep, b.rep, strategy)
        return Presubobject(C, compose(a.rep, w.left))
    if isinstance(phi, Exists):
        inner = ctx.extend(phi.var, phi.type)
        body = _interp(phi.body, inner, strategy)
        return Presubobject(C, compose(inner.drop_last(), body.rep))
    if isinstance(phi, Forall):
        from .fullness import forall_along

        inner = ctx.extend(phi.var, phi.type)
        body = _interp(phi.body, inner, strategy)
        return forall_along(inner.drop_last(), body, strategy)
    if isinstance(phi, Implies):
        from .fullness import forall_along

        a, b = _interp(phi.left, ctx, strategy), _interp(phi.right, ctx, strategy)
        w = weak_pullback(a.rep, b.rep, strategy)
        return forall_along(a.rep, Presubobject(a.apex, w.left), strategy)
    raise FormulaTypeError(f"not a formula: {phi!r}")


def pullback_along(f: FiniteMap, h: Presubobject, strategy: Strategy = MINIMAL) -> Presubobject:
    """``f* h`` for ``f: X -> I`` and a presubobject ``h`` of I."""
    w = weak_pullback(f, h.rep, strategy)
    return Presubobject(f.dom, w.left)


# -- element semantics (independent evaluator) -------------------------------

def evaluate(phi: Formula, env: dict[str, str]) -> bool:
    """Truth of ``phi`` at an assignment of labels to variables."""
    if isinstance(phi, Truth):
        return True
    if isinstance(phi, Eq):
        return _eval_term(phi.lhs, env) == _eval_term(phi.rhs, env)
    if isinstance(phi, Rel):
        return phi.span.holds(*[_eval_term(a, env) for a in phi.args])
    if isinstance(phi, And):
        return evaluate(phi.left, env) and evaluate(phi.right, env)
    if isinstance(phi, Implies):
        return (not evaluate(phi.left, env)) or evaluate(phi.right, env)
    if isinstance(phi, Exists):
        return any(evaluate(phi.body, {**env, phi.var: y}) for y in phi.type)
    if isinstance(phi, Forall):
        return all(evaluate(phi.body, {**env, phi.var: y}) for y in phi.type)
    raise FormulaTypeError(f"not a formula: {phi!r}")


def _eval_term(t: Term, env: dict[str, str]) -> str:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise ElementError(f"unbound variable {t.name!r}") from None
    return t.fn(_eval_term(t.arg, env))


def element_semantics(phi: Formula, context: Context) -> frozenset[int]:
    """Indices of context-object elements satisfying ``phi`` by direct evaluation."""
    names = [n for n, _ in context]
    out = set()
    for k, combo in enumerate(itertools.product(*[t.labels for _, t in context])):
        if evaluate(phi, dict(zip(names, combo))):
            out.add(k)
    return frozenset(out)
