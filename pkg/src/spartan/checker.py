"""Bidirectional type checking, conversion and declaration processing."""

from __future__ import annotations

from typing import Iterable, Optional

from .builtins import BUILTINS
from .env import GlobalEntry, GlobalEnv
from .errors import (
    CheckError, CheckOnlyTermInInferPosition, DepthExceeded, LevelArityMismatch,
    NotAFunction, NotAPair, NotAUniverse, TypeMismatch, UnboundName, UnsafeAssume,
)
from .evaluator import (
    Context, Value, VPi, VSigma, VUniverse, builtin_type, eval_term, evaluate,
    global_type, quote, quote_type, conv_value, conv_type, vfst, budget, DEFAULT_BUDGET,
)
from .levels import Level, LevelNF, level_normalize, level_vars
from .printer import print_term
from .syntax import (
    App, Ascribe, Assume, Const, Declaration, Def, Fst, Lam, Pair, Pi, Ref, Sigma, Snd, Span,
    Term, Universe, Var, syntactic_equal,
)


def _levels(ctx: Context, levels: Iterable[Level], span: Optional[Span]) -> tuple[LevelNF, ...]:
    out = []
    for l in levels:
        unbound = level_vars(l) - ctx.level_params
        if unbound:
            raise UnboundName(f"unbound level variable {sorted(unbound)[0]}", span)
        out.append(level_normalize(l))
    return tuple(out)


def _show(ctx: Context, t: Term) -> str:
    return print_term(t, list(ctx.names))


def infer(ctx: Context, genv: GlobalEnv, t: Term) -> tuple[Term, Value]:
    """Synthesize a type for ``t``; returns the elaborated term and its type."""
    match t:
        case Var(i):
            ty = ctx.lookup(i)
            if ty is None:
                raise UnboundName(f"variable #{i} is out of scope", t.span)
            return t, ty
        case Universe(l):
            (nf,) = _levels(ctx, (l,), t.span)
            return t, VUniverse(nf.suc())
        case Pi(name, dom, cod) | Sigma(name, dom, cod):
            dom_t, dom_l = infer_universe(ctx, genv, dom)
            inner, _ = ctx.bind(name, evaluate(ctx, genv, dom_t))
            cod_t, cod_l = infer_universe(inner, genv, cod)
            out = Pi(name, dom_t, cod_t) if isinstance(t, Pi) else Sigma(name, dom_t, cod_t)
            return out, VUniverse(dom_l.join(cod_l))
        case App(fn, arg):
            fn_t, fn_ty = infer(ctx, genv, fn)
            if not isinstance(fn_ty, VPi):
                raise NotAFunction(
                    f"{_show(ctx, fn_t)} is applied to an argument but has type "
                    f"{_show(ctx, quote_type(ctx.depth, fn_ty))}",
                    fn.span or t.span,
                )
            arg_t = check(ctx, genv, arg, fn_ty.domain)
            return App(fn_t, arg_t), fn_ty.codomain(evaluate(ctx, genv, arg_t))
        case Fst(p) | Snd(p):
            p_t, p_ty = infer(ctx, genv, p)
            if not isinstance(p_ty, VSigma):
                raise NotAPair(
                    f"projection from {_show(ctx, p_t)} of non-Sigma type "
                    f"{_show(ctx, quote_type(ctx.depth, p_ty))}",
                    t.span,
                )
            if isinstance(t, Fst):
                return Fst(p_t), p_ty.first
            return Snd(p_t), p_ty.second(vfst(evaluate(ctx, genv, p_t)))
        case Ascribe(inner, ty):
            ty_t, _ = infer_universe(ctx, genv, ty)
            ty_v = evaluate(ctx, genv, ty_t)
            return check(ctx, genv, inner, ty_v), ty_v
        case Const(name, levels):
            b = BUILTINS.get(name)
            if b is None:
                raise UnboundName(f"unknown built-in {name}", t.span)
            if len(levels) != len(b.level_params):
                raise LevelArityMismatch(
                    f"{name} takes {len(b.level_params)} level argument(s), got {len(levels)}", t.span
                )
            return t, builtin_type(name, _levels(ctx, levels, t.span))
        case Ref(name, levels):
            entry = genv.lookup(name)
            if entry is None:
                raise UnboundName(f"unbound name {name}", t.span)
            if len(levels) != len(entry.level_params):
                raise LevelArityMismatch(
                    f"{name} takes {len(entry.level_params)} level argument(s), got {len(levels)}",
                    t.span,
                )
            return t, global_type(entry, _levels(ctx, levels, t.span), genv)
        case Lam() | Pair():
            kind = "lambda" if isinstance(t, Lam) else "pair"
            raise CheckOnlyTermInInferPosition(
                f"cannot infer the type of a {kind}; add a type ascription", t.span
            )
    raise TypeError(f"not a term: {t!r}")


def infer_universe(ctx: Context, genv: GlobalEnv, t: Term) -> tuple[Term, LevelNF]:
    t2, ty = infer(ctx, genv, t)
    if not isinstance(ty, VUniverse):
        raise NotAUniverse(
            f"{_show(ctx, t2)} is used as a type but has type {_show(ctx, quote_type(ctx.depth, ty))}",
            t.span,
        )
    return t2, ty.level


def check(ctx: Context, genv: GlobalEnv, t: Term, expected: Value) -> Term:
    """Check ``t`` against ``expected``; returns the elaborated term."""
    match t:
        case Lam(name, body):
            if not isinstance(expected, VPi):
                raise NotAFunction(
                    f"lambda checked against non-function type "
                    f"{_show(ctx, quote_type(ctx.depth, expected))}",
                    t.span,
                )
            inner, x = ctx.bind(name, expected.domain)
            return Lam(name, check(inner, genv, body, expected.codomain(x)))
        case Pair(first, second):
            if not isinstance(expected, VSigma):
                raise NotAPair(
                    f"pair checked against non-Sigma type "
                    f"{_show(ctx, quote_type(ctx.depth, expected))}",
                    t.span,
                )
            a = check(ctx, genv, first, expected.first)
            b = check(ctx, genv, second, expected.second(evaluate(ctx, genv, a)))
            return Pair(a, b)
    t2, got = infer(ctx, genv, t)
    conv_types(ctx, expected, got, t.span)
    return t2


def conv(ctx: Context, ty: Value, a: Value, b: Value, span: Optional[Span] = None) -> None:
    """Accept iff ``a`` and ``b`` have the same normal form at ``ty``."""
    if conv_value(ctx.depth, ty, a, b):
        return
    qa, qb = quote(ctx.depth, a, ty), quote(ctx.depth, b, ty)
    if not syntactic_equal(qa, qb):
        raise TypeMismatch("terms are not definitionally equal", _show(ctx, qa), _show(ctx, qb), span)


def conv_types(ctx: Context, expected: Value, got: Value, span: Optional[Span] = None) -> None:
    if conv_type(ctx.depth, expected, got):
        return
    qe, qg = quote_type(ctx.depth, expected), quote_type(ctx.depth, got)
    if not syntactic_equal(qe, qg):
        raise TypeMismatch("type mismatch", _show(ctx, qe), _show(ctx, qg), span)


def check_decl(
    genv: GlobalEnv, d: Declaration, safe: bool = False, max_depth: int = DEFAULT_BUDGET
) -> GlobalEnv:
    """Check one declaration and return the extended environment."""
    try:
        with budget(max_depth):
            return _check_decl(genv, d, safe)
    except RecursionError:
        err = DepthExceeded("evaluation recursed too deeply", d.span)
        err.decl = d.name
        raise err from None
    except CheckError as err:
        if err.span is None:
            err.span = d.span
        err.decl = d.name
        raise


def _check_decl(genv: GlobalEnv, d: Declaration, safe: bool) -> GlobalEnv:
    if d.name in genv or d.name in BUILTINS:
        raise UnboundName(f"{d.name} is already defined", d.span)
    if isinstance(d, Assume) and safe:
        raise UnsafeAssume(f"assumption {d.name} is not allowed in safe mode", d.span)
    ctx = Context(level_params=frozenset(d.level_params))
    ty_t, _ = infer_universe(ctx, genv, d.type)
    if isinstance(d, Def):
        body_t = check(ctx, genv, d.body, eval_term(ctx.env(genv), ty_t))
        return genv.extend(GlobalEntry(d.name, d.level_params, ty_t, body_t, d.span))
    return genv.extend(GlobalEntry(d.name, d.level_params, ty_t, None, d.span))


def check_module(
    decls: Iterable[Declaration],
    genv: Optional[GlobalEnv] = None,
    safe: bool = False,
    max_depth: int = DEFAULT_BUDGET,
) -> GlobalEnv:
    genv = genv if genv is not None else GlobalEnv()
    for d in decls:
        genv = check_decl(genv, d, safe, max_depth)
    return genv


def infer_closed(genv: GlobalEnv, t: Term, max_depth: int = DEFAULT_BUDGET) -> tuple[Term, Value]:
    """Infer a closed term with no level parameters in scope."""
    try:
        with budget(max_depth):
            return infer(Context(), genv, t)
    except RecursionError:
        raise DepthExceeded("evaluation recursed too deeply", t.span) from None


def normalize_closed(genv: GlobalEnv, t: Term, max_depth: int = DEFAULT_BUDGET) -> tuple[Term, Term]:
    """Elaborate, normalize and return ``(normal form, normal type)``."""
    try:
        with budget(max_depth):
            t2, ty = infer(Context(), genv, t)
            nf = quote(0, eval_term(Context().env(genv), t2), ty)
            return nf, quote_type(0, ty)
    except RecursionError:
        raise DepthExceeded("evaluation recursed too deeply", t.span) from None
