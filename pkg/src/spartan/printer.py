"""Pretty-printer producing surface syntax that parses back to the same term."""

from __future__ import annotations

from typing import Optional, Sequence

from .levels import LMax, LSuc, LVar, LZero, Level
from .syntax import (
    App, Ascribe, Const, Fst, Lam, Pair, Pi, Ref, Sigma, Snd, Term, Universe, Var,
    as_numeral, free_in, global_names,
)

# precedence: 0 binders and arrows, 1 products, 2 application, 3 atoms
_TOP, _PROD, _APP, _ATOM = 0, 1, 2, 3


def print_level(l: Level, atomic: bool = False) -> str:
    match l:
        case LZero():
            return "lzero"
        case LVar(name):
            return name
        case LSuc(arg):
            s = f"lsuc {print_level(arg, True)}"
        case LMax(a, b):
            s = f"lmax {print_level(a, True)} {print_level(b, True)}"
        case _:
            raise TypeError(f"not a level: {l!r}")
    return f"({s})" if atomic else s


def _levels(levels: Sequence[Level]) -> str:
    if not levels:
        return ""
    return " {" + ", ".join(print_level(l) for l in levels) + "}"


class _Printer:
    def __init__(self, avoid: set[str]):
        self.avoid = avoid

    def fresh(self, hint: str, scope: list[str]) -> str:
        from .parser import RESERVED

        base = hint if hint and hint != "_" else "x"
        taken = set(scope) | self.avoid | RESERVED
        if base not in taken:
            return base
        k = 1
        while f"{base}{k}" in taken:
            k += 1
        return f"{base}{k}"

    def binder(self, hint: str, body: Term, scope: list[str]) -> str:
        if hint == "_" and not free_in(body):
            return "_"
        return self.fresh(hint, scope)

    def show(self, t: Term, scope: list[str], prec: int) -> str:
        s, p = self.render(t, scope)
        return f"({s})" if p < prec else s

    def operand(self, t: Term, scope: list[str], prec: int) -> str:
        """Left operand of ``->`` or ``*``; must not look like a telescope."""
        s = self.show(t, scope, prec)
        return f"({s})" if _telescope_like(s) else s

    def render(self, t: Term, scope: list[str]) -> tuple[str, int]:
        n = as_numeral(t)
        if n is not None:
            return str(n), _ATOM
        match t:
            case Var(i):
                if i >= len(scope):
                    return f"#{i}", _ATOM
                return scope[len(scope) - 1 - i], _ATOM
            case Universe(l):
                return f"U {print_level(l, True)}", _APP
            case Const(name, levels) | Ref(name, levels):
                s = name + _levels(levels)
                return s, (_ATOM if not levels else _APP)
            case Lam():
                parts = []
                while isinstance(t, Lam):
                    x = self.binder(t.name, t.body, scope)
                    parts.append(x)
                    scope = scope + [x]
                    t = t.body
                return f"\\{' '.join(parts)} -> {self.show(t, scope, _TOP)}", _TOP
            case Pi(name, dom, cod):
                if not free_in(cod):
                    left = self.operand(dom, scope, _PROD)
                    return f"{left} -> {self.show(cod, scope + ['_'], _TOP)}", _TOP
                x = self.fresh(name, scope)
                return f"({x} : {self.show(dom, scope, _TOP)}) -> {self.show(cod, scope + [x], _TOP)}", _TOP
            case Sigma(name, dom, cod):
                if not free_in(cod):
                    left = self.operand(dom, scope, _APP)
                    return f"{left} * {self.show(cod, scope + ['_'], _PROD)}", _PROD
                x = self.fresh(name, scope)
                return f"({x} : {self.show(dom, scope, _TOP)}) * {self.show(cod, scope + [x], _PROD)}", _PROD
            case App(fn, arg):
                return f"{self.show(fn, scope, _APP)} {self.show(arg, scope, _ATOM)}", _APP
            case Fst(p):
                return f"fst {self.show(p, scope, _ATOM)}", _APP
            case Snd(p):
                return f"snd {self.show(p, scope, _ATOM)}", _APP
            case Pair(a, b):
                return f"({self.show(a, scope, _TOP)}, {self.show(b, scope, _TOP)})", _ATOM
            case Ascribe(a, ty):
                return f"({self.show(a, scope, _TOP)} : {self.show(ty, scope, _TOP)})", _ATOM
        raise TypeError(f"not a term: {t!r}")


def _telescope_like(s: str) -> bool:
    # "(x y : A) ..." reads as a binder group when followed by -> or *
    if not s.startswith("("):
        return False
    head = s[1:].split(":", 1)[0].split()
    return bool(head) and all(w.replace("-", "").replace("'", "").replace("_", "a").isalnum() for w in head)


def _sanitize(names: Sequence[Optional[str]], avoid: set[str]) -> list[str]:
    from .parser import RESERVED

    out: list[str] = []
    for n in names:
        base = n if n and n != "_" else "x"
        cand, k = base, 1
        while cand in out or cand in avoid or cand in RESERVED:
            cand = f"{base}{k}"
            k += 1
        out.append(cand)
    return out


def print_term(t: Term, names: Sequence[Optional[str]] = ()) -> str:
    """Render ``t`` whose free variables are named by ``names`` (outermost first)."""
    avoid = global_names(t)
    p = _Printer(avoid)
    return p.show(t, _sanitize(names, avoid), _TOP)
