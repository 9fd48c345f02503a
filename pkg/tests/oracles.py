"""Reference semantics used as test oracles.

``subst_normalize`` is a naive normalizer for closed terms that works by
de Bruijn substitution and head reduction.  It shares no code with the
evaluator, so agreement between the two is meaningful.
"""

from __future__ import annotations

from hypothesis import strategies as st

from spartan.syntax import (
    App, Ascribe, Const, Fst, Lam, Pair, Pi, Ref, Sigma, Snd, Term, Universe, Var, apps, numeral,
)
from spartan.levels import LZero

Z = (LZero(),)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    match t:
        case Var(i):
            return Var(i + by) if i >= cutoff else t
        case Lam(n, b):
            return Lam(n, shift(b, by, cutoff + 1))
        case Pi(n, d, c):
            return Pi(n, shift(d, by, cutoff), shift(c, by, cutoff + 1))
        case Sigma(n, d, c):
            return Sigma(n, shift(d, by, cutoff), shift(c, by, cutoff + 1))
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff))
        case Pair(a, b):
            return Pair(shift(a, by, cutoff), shift(b, by, cutoff))
        case Fst(p):
            return Fst(shift(p, by, cutoff))
        case Snd(p):
            return Snd(shift(p, by, cutoff))
        case Ascribe(a, ty):
            return Ascribe(shift(a, by, cutoff), shift(ty, by, cutoff))
    return t


def subst(t: Term, j: int, s: Term) -> Term:
    match t:
        case Var(i):
            return s if i == j else t
        case Lam(n, b):
            return Lam(n, subst(b, j + 1, shift(s, 1)))
        case Pi(n, d, c):
            return Pi(n, subst(d, j, s), subst(c, j + 1, shift(s, 1)))
        case Sigma(n, d, c):
            return Sigma(n, subst(d, j, s), subst(c, j + 1, shift(s, 1)))
        case App(f, a):
            return App(subst(f, j, s), subst(a, j, s))
        case Pair(a, b):
            return Pair(subst(a, j, s), subst(b, j, s))
        case Fst(p):
            return Fst(subst(p, j, s))
        case Snd(p):
            return Snd(subst(p, j, s))
        case Ascribe(a, ty):
            return Ascribe(subst(a, j, s), subst(ty, j, s))
    return t


def beta(body: Term, arg: Term) -> Term:
    return shift(subst(body, 0, shift(arg, 1)), -1)


def _spine(t: Term):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


def whnf(t: Term) -> Term:
    """Weak head normal form of a closed term."""
    while True:
        head, args = _spine(t)
        match head:
            case Ascribe(inner, _):
                t = apps(inner, *args)
                continue
            case Lam(_, body) if args:
                t = apps(beta(body, args[0]), *args[1:])
                continue
            case Fst(p) | Snd(p):
                p = whnf(p)
                if isinstance(p, Pair):
                    t = apps(p.first if isinstance(head, Fst) else p.second, *args)
                    continue
                return t
            case Const(name):
                step = _iota(name, args)
                if step is not None:
                    t = step
                    continue
        return t


def _iota(name: str, args: list):
    match name, len(args):
        case "natInd", n if n >= 4:
            motive, base, step, k = args[:4]
            k = whnf(k)
            if isinstance(k, Const) and k.name == "zero":
                return apps(base, *args[4:])
            if isinstance(k, App) and isinstance(k.fn, Const) and k.fn.name == "succ":
                rec = apps(Const("natInd", Z), motive, base, step, k.arg)
                return apps(step, k.arg, rec, *args[4:])
        case "unitInd", n if n >= 3:
            if _is_const(whnf(args[2]), "star"):
                return apps(args[1], *args[3:])
        case "sumInd", n if n >= 6:
            z = whnf(args[5])
            head, zargs = _spine(z)
            if isinstance(head, Const) and head.name in ("inl", "inr") and len(zargs) == 3:
                branch = args[3] if head.name == "inl" else args[4]
                return apps(branch, zargs[2], *args[6:])
        case "J", n if n >= 6:
            p = whnf(args[5])
            head, pargs = _spine(p)
            if isinstance(head, Const) and head.name == "refl":
                return apps(args[2], args[3], *args[6:])
    return None


def _is_const(t: Term, name: str) -> bool:
    return isinstance(t, Const) and t.name == name


def subst_normalize_nat(t: Term) -> int:
    """Value of a closed term of type Nat."""
    n = 0
    while True:
        t = whnf(t)
        if _is_const(t, "zero"):
            return n
        if isinstance(t, App) and _is_const(t.fn, "succ"):
            n += 1
            t = t.arg
            continue
        raise ValueError(f"stuck: {t!r}")


# ---------------------------------------------------------------------------
# well-typed closed terms of a small simply typed fragment

NAT = "N"
NAT_TERM = Const("Nat")


def type_term(ty) -> Term:
    match ty:
        case "N":
            return NAT_TERM
        case ("->", a, b):
            return Pi("_", type_term(a), shift(type_term(b), 1))
        case ("*", a, b):
            return Sigma("_", type_term(a), shift(type_term(b), 1))
    raise ValueError(ty)


SMALL_TYPES = [NAT, ("->", NAT, NAT), ("*", NAT, NAT)]


@st.composite
def typed_terms(draw, ty=NAT, ctx=(), fuel=5):
    """A term of type ``ty`` in the context ``ctx`` (list of types, outermost first)."""
    depth = len(ctx)
    vars_ = [depth - 1 - i for i, t in enumerate(ctx) if t == ty]
    options = ["var"] if vars_ else []
    if ty == NAT:
        options += ["num"]
        if fuel > 0:
            options += ["succ", "natInd", "fst", "snd", "app", "unitInd", "sumInd", "J"]
    elif ty[0] == "->":
        options += ["lam"]
        if fuel > 0:
            options += ["app"]
    elif ty[0] == "*":
        options += ["pair"]
    kind = draw(st.sampled_from(options))
    sub = lambda t, c=ctx: typed_terms(t, c, fuel - 1)
    match kind:
        case "var":
            return Var(draw(st.sampled_from(vars_)))
        case "num":
            return numeral(draw(st.integers(0, 3)))
        case "succ":
            return App(Const("succ"), draw(sub(NAT)))
        case "natInd":
            motive = Lam("_", NAT_TERM)
            step = Lam("n", Lam("r", draw(typed_terms(NAT, ctx + (NAT, NAT), fuel - 2))))
            return apps(Const("natInd", Z), motive, draw(sub(NAT)), step, numeral(draw(st.integers(0, 3))))
        case "fst":
            return Fst(_inferable(draw(sub(("*", NAT, NAT))), ("*", NAT, NAT)))
        case "snd":
            return Snd(_inferable(draw(sub(("*", NAT, NAT))), ("*", NAT, NAT)))
        case "app":
            arg_ty = draw(st.sampled_from([NAT, ("*", NAT, NAT)]))
            fn_ty = ("->", arg_ty, ty)
            return App(_inferable(draw(sub(fn_ty)), fn_ty), draw(sub(arg_ty)))
        case "lam":
            _, a, b = ty
            return Lam("x", draw(typed_terms(b, ctx + (a,), fuel - 1)))
        case "pair":
            return Pair(draw(sub(ty[1])), draw(sub(ty[2])))
        case "unitInd":
            return apps(Const("unitInd", Z), Lam("_", NAT_TERM), draw(sub(NAT)), Const("star"))
        case "sumInd":
            left = draw(st.booleans())
            inj = apps(Const("inl" if left else "inr", Z + Z), NAT_TERM, NAT_TERM, draw(sub(NAT)))
            branch = lambda: Lam("x", draw(typed_terms(NAT, ctx + (NAT,), fuel - 2)))
            return apps(Const("sumInd", Z * 3), NAT_TERM, NAT_TERM, Lam("_", NAT_TERM),
                        branch(), branch(), inj)
        case "J":
            a = draw(sub(NAT))
            motive = Lam("x", Lam("y", Lam("p", NAT_TERM)))
            base = Lam("x", draw(typed_terms(NAT, ctx + (NAT,), fuel - 2)))
            return apps(Const("J", Z * 2), NAT_TERM, motive, base, a, a,
                        apps(Const("refl", Z), NAT_TERM, a))
    raise AssertionError(kind)


def _inferable(t: Term, ty) -> Term:
    return Ascribe(t, type_term(ty)) if isinstance(t, (Lam, Pair)) else t


def unary_plus(m: int, n: int) -> Term:
    """``m + n`` by recursion on the first argument, as a closed term."""
    step = Lam("_", Lam("r", App(Const("succ"), Var(0))))
    return apps(Const("natInd", Z), Lam("_", NAT_TERM), numeral(n), step, numeral(m))
