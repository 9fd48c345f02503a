"""Core terms with de Bruijn indices, declarations and syntactic equality.

Binder names are kept only as printing hints and never take part in
equality.  Every node may carry a source span (also ignored by equality).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .levels import Level, level_equal, level_vars


@dataclass(frozen=True, slots=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True, slots=True)
class Var:
    index: int
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Universe:
    level: Level
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Pi:
    name: str
    domain: "Term"
    codomain: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Lam:
    name: str
    body: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Sigma:
    name: str
    first: "Term"
    second: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Pair:
    first: "Term"
    second: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Fst:
    pair: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Snd:
    pair: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Ascribe:
    term: "Term"
    type: "Term"
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Const:
    """A built-in constant such as ``natInd`` or ``refl``."""

    name: str
    levels: tuple[Level, ...] = ()
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Ref:
    """A reference to a global definition or assumption."""

    name: str
    levels: tuple[Level, ...] = ()
    span: Optional[Span] = _span()


Term = Union[Var, Universe, Pi, Lam, App, Sigma, Pair, Fst, Snd, Ascribe, Const, Ref]


@dataclass(frozen=True, slots=True)
class Def:
    name: str
    level_params: tuple[str, ...]
    type: Term
    body: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class Assume:
    name: str
    level_params: tuple[str, ...]
    type: Term
    span: Optional[Span] = _span()


Declaration = Union[Def, Assume]


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def numeral(n: int) -> Term:
    t: Term = Const("zero")
    for _ in range(n):
        t = App(Const("succ"), t)
    return t


def as_numeral(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, App) and isinstance(t.fn, Const) and t.fn.name == "succ":
        n += 1
        t = t.arg
    if isinstance(t, Const) and t.name == "zero":
        return n
    return None


def syntactic_equal(a: Term, b: Term) -> bool:
    """Structural equality up to binder names, spans and level algebra."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return False
        match x:
            case Var(i):
                if i != y.index:
                    return False
            case Universe(l):
                if not level_equal(l, y.level):
                    return False
            case Pi(_, d, c) | Sigma(_, d, c):
                other = (y.domain, y.codomain) if isinstance(y, Pi) else (y.first, y.second)
                stack.append((d, other[0]))
                stack.append((c, other[1]))
            case Lam(_, body):
                stack.append((body, y.body))
            case App(f, arg):
                stack.append((f, y.fn))
                stack.append((arg, y.arg))
            case Pair(p, q):
                stack.append((p, y.first))
                stack.append((q, y.second))
            case Fst(p) | Snd(p):
                stack.append((p, y.pair))
            case Ascribe(t, ty):
                stack.append((t, y.term))
                stack.append((ty, y.type))
            case Const(name, levels) | Ref(name, levels):
                if name != y.name or len(levels) != len(y.levels):
                    return False
                if not all(level_equal(l, m) for l, m in zip(levels, y.levels)):
                    return False
            case _:
                raise TypeError(f"not a term: {x!r}")
    return True


def children(t: Term) -> tuple[Term, ...]:
    match t:
        case Pi(_, d, c):
            return (d, c)
        case Sigma(_, d, c):
            return (d, c)
        case Lam(_, body):
            return (body,)
        case App(f, a):
            return (f, a)
        case Pair(p, q):
            return (p, q)
        case Fst(p) | Snd(p):
            return (p,)
        case Ascribe(t2, ty):
            return (t2, ty)
    return ()


def binds(t: Term) -> tuple[bool, ...]:
    """Which children of ``t`` sit under one extra binder."""
    match t:
        case Pi() | Sigma():
            return (False, True)
        case Lam():
            return (True,)
    return (False,) * len(children(t))


def subterms(t: Term, depth: int = 0):
    """Yield ``(term, depth)`` for ``t`` and all of its subterms."""
    stack = [(t, depth)]
    while stack:
        s, d = stack.pop()
        yield s, d
        for child, under in zip(children(s), binds(s)):
            stack.append((child, d + 1 if under else d))


def free_in(t: Term, index: int = 0) -> bool:
    """Does ``Var(index)`` (relative to ``t``'s root) occur in ``t``?"""
    return any(isinstance(s, Var) and s.index == index + d for s, d in subterms(t))


def global_names(t: Term) -> set[str]:
    return {s.name for s, _ in subterms(t) if isinstance(s, Ref)}


def term_level_vars(t: Term) -> set[str]:
    out: set[str] = set()
    for s, _ in subterms(t):
        match s:
            case Universe(l):
                out |= level_vars(l)
            case Const(_, levels) | Ref(_, levels):
                for l in levels:
                    out |= level_vars(l)
    return out


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))
