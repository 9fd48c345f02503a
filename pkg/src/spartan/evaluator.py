"""Normalization by evaluation.

Terms are evaluated into a semantic domain where functions are closures
and stuck computations are typed neutrals.  Readback (:func:`quote`) is
type-directed and eta-expands at Pi, Sigma and Lift types; the unit,
sum, natural-number and identity types have no eta rule.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .builtins import BUILTINS, builtin_type_term
from .env import GlobalEntry, GlobalEnv
from .errors import DepthExceeded, InternalNotAFunction, InternalScope, KernelBug
from .levels import Level, LevelNF, level_normalize
from .syntax import (
    App, Ascribe, Const, Fst, Lam, Pair, Pi, Ref, Sigma, Snd, Term, Universe, Var,
)

DEFAULT_BUDGET = 1_000_000


# ---------------------------------------------------------------------------
# firing budget

class Budget:
    def __init__(self, limit: int = DEFAULT_BUDGET):
        if limit < 1:
            raise ValueError("budget must be at least 1")
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise DepthExceeded(f"more than {self.limit} eliminator firings")


_local = threading.local()


def _budget() -> Budget:
    b = getattr(_local, "budget", None)
    if b is None:
        b = _local.budget = Budget()
    return b


@contextmanager
def budget(limit: int = DEFAULT_BUDGET):
    """Run a block with a fresh firing budget (per thread)."""
    saved = getattr(_local, "budget", None)
    _local.budget = b = Budget(limit)
    try:
        yield b
    finally:
        _local.budget = saved


# ---------------------------------------------------------------------------
# semantic domain

@dataclass(slots=True, eq=False)
class Env:
    vals: tuple
    levels: Mapping[str, LevelNF]
    genv: GlobalEnv

    def push(self, v: "Value") -> "Env":
        return Env(self.vals + (v,), self.levels, self.genv)

    def level(self, l: Level) -> LevelNF:
        nf = level_normalize(l)
        return nf.subst(self.levels) if self.levels else nf


@dataclass(slots=True, eq=False)
class Closure:
    env: Env
    body: Term

    def __call__(self, arg: "Value") -> "Value":
        return eval_term(self.env.push(arg), self.body)


@dataclass(slots=True, eq=False)
class VUniverse:
    level: LevelNF


@dataclass(slots=True, eq=False)
class VPi:
    name: str
    domain: "Value"
    codomain: Closure


@dataclass(slots=True, eq=False)
class VLam:
    name: str
    body: Closure


@dataclass(slots=True, eq=False)
class VSigma:
    name: str
    first: "Value"
    second: Closure


@dataclass(slots=True, eq=False)
class VPair:
    first: "Value"
    second: "Value"


class _Atom:
    __slots__ = ()

    def __repr__(self) -> str:
        return type(self).__name__


class VNat(_Atom):
    pass


class VZero(_Atom):
    pass


class VEmpty(_Atom):
    pass


class VUnit(_Atom):
    pass


class VStar(_Atom):
    pass


NAT, ZERO, EMPTY, UNIT, STAR = VNat(), VZero(), VEmpty(), VUnit(), VStar()


@dataclass(slots=True, eq=False)
class VSucc:
    pred: "Value"


@dataclass(slots=True, eq=False)
class VSum:
    left: "Value"
    right: "Value"
    lu: LevelNF
    lv: LevelNF


@dataclass(slots=True, eq=False)
class VInl:
    value: "Value"
    left: "Value"
    right: "Value"
    lu: LevelNF
    lv: LevelNF


@dataclass(slots=True, eq=False)
class VInr:
    value: "Value"
    left: "Value"
    right: "Value"
    lu: LevelNF
    lv: LevelNF


@dataclass(slots=True, eq=False)
class VId:
    type: "Value"
    lhs: "Value"
    rhs: "Value"
    level: LevelNF


@dataclass(slots=True, eq=False)
class VRefl:
    type: "Value"
    point: "Value"
    level: LevelNF


@dataclass(slots=True, eq=False)
class VLift:
    inner: "Value"
    lu: LevelNF
    lv: LevelNF


@dataclass(slots=True, eq=False)
class VLiftIn:
    value: "Value"
    inner: "Value"
    lu: LevelNF
    lv: LevelNF


@dataclass(slots=True, eq=False)
class VPartial:
    """A built-in constant applied to fewer arguments than its arity."""

    name: str
    levels: tuple[LevelNF, ...]
    args: tuple = ()


# Neutral terms.  Each node is wrapped in a VNeutral carrying its type, so
# readback can recover the type of every argument along a spine.

@dataclass(slots=True, eq=False)
class NVar:
    level: int  # de Bruijn level


@dataclass(slots=True, eq=False)
class NConst:
    name: str
    levels: tuple[LevelNF, ...]


@dataclass(slots=True, eq=False)
class NApp:
    fn: "VNeutral"
    arg: "Value"


@dataclass(slots=True, eq=False)
class NFst:
    pair: "VNeutral"


@dataclass(slots=True, eq=False)
class NSnd:
    pair: "VNeutral"


@dataclass(slots=True, eq=False)
class NElim:
    """A saturated eliminator stuck on its final (scrutinee) argument."""

    name: str
    levels: tuple[LevelNF, ...]
    args: tuple
    scrutinee: "VNeutral"


Neutral = Union[NVar, NConst, NApp, NFst, NSnd, NElim]


@dataclass(slots=True, eq=False)
class VNeutral:
    ne: Neutral
    type: "Value"


Value = Union[
    VUniverse, VPi, VLam, VSigma, VPair, VNat, VZero, VSucc, VEmpty, VUnit, VStar,
    VSum, VInl, VInr, VId, VRefl, VLift, VLiftIn, VPartial, VNeutral,
]


def fresh(depth: int, ty: Value) -> VNeutral:
    return VNeutral(NVar(depth), ty)


# ---------------------------------------------------------------------------
# evaluation

_EMPTY_GENV = GlobalEnv()
_builtin_types: dict = {}


def builtin_type(name: str, levels: tuple[LevelNF, ...]) -> Value:
    key = (name, levels)
    ty = _builtin_types.get(key)
    if ty is None:
        b = BUILTINS[name]
        env = Env((), dict(zip(b.level_params, levels)), _EMPTY_GENV)
        ty = _builtin_types[key] = eval_term(env, builtin_type_term(name))
    return ty


def global_type(entry: GlobalEntry, levels: tuple[LevelNF, ...], genv: GlobalEnv) -> Value:
    ty = entry.type_cache.get(levels)
    if ty is None:
        env = Env((), dict(zip(entry.level_params, levels)), genv)
        ty = entry.type_cache[levels] = eval_term(env, entry.type)
    return ty


def global_value(entry: GlobalEntry, levels: tuple[LevelNF, ...], genv: GlobalEnv) -> Value:
    if entry.body is None:
        return VNeutral(NConst(entry.name, levels), global_type(entry, levels, genv))
    v = entry.value_cache.get(levels)
    if v is None:
        env = Env((), dict(zip(entry.level_params, levels)), genv)
        v = entry.value_cache[levels] = eval_term(env, entry.body)
    return v


def const_value(name: str, levels: tuple[LevelNF, ...]) -> Value:
    match name:
        case "Nat":
            return NAT
        case "zero":
            return ZERO
        case "Empty":
            return EMPTY
        case "Unit":
            return UNIT
        case "star":
            return STAR
    return VPartial(name, levels)


def eval_term(env: Env, t: Term) -> Value:
    match t:
        case Var(i):
            n = len(env.vals)
            if i >= n:
                raise InternalScope(f"variable #{i} under {n} binders")
            return env.vals[n - 1 - i]
        case App(f, a):
            return apply(eval_term(env, f), eval_term(env, a))
        case Lam(name, body):
            return VLam(name, Closure(env, body))
        case Pi(name, d, c):
            return VPi(name, eval_term(env, d), Closure(env, c))
        case Sigma(name, d, c):
            return VSigma(name, eval_term(env, d), Closure(env, c))
        case Pair(p, q):
            return VPair(eval_term(env, p), eval_term(env, q))
        case Fst(p):
            return vfst(eval_term(env, p))
        case Snd(p):
            return vsnd(eval_term(env, p))
        case Universe(l):
            return VUniverse(env.level(l))
        case Const(name, levels):
            return const_value(name, tuple(env.level(l) for l in levels))
        case Ref(name, levels):
            entry = env.genv.lookup(name)
            if entry is None:
                raise InternalScope(f"unknown global {name}")
            return global_value(entry, tuple(env.level(l) for l in levels), env.genv)
        case Ascribe(inner, _):
            return eval_term(env, inner)
    raise InternalScope(f"not a term: {t!r}")


def apply(fn: Value, arg: Value) -> Value:
    if isinstance(fn, VLam):
        return fn.body(arg)
    if isinstance(fn, VPartial):
        args = fn.args + (arg,)
        if len(args) == BUILTINS[fn.name].arity:
            return fire(fn.name, fn.levels, args)
        return VPartial(fn.name, fn.levels, args)
    if isinstance(fn, VNeutral):
        ty = fn.type
        if not isinstance(ty, VPi):
            raise InternalNotAFunction(f"neutral of type {type(ty).__name__} applied")
        return VNeutral(NApp(fn, arg), ty.codomain(arg))
    raise InternalNotAFunction(f"{type(fn).__name__} applied to an argument")


def apply_many(fn: Value, *args: Value) -> Value:
    for a in args:
        fn = apply(fn, a)
    return fn


def vfst(p: Value) -> Value:
    if isinstance(p, VPair):
        return p.first
    if isinstance(p, VNeutral) and isinstance(p.type, VSigma):
        return VNeutral(NFst(p), p.type.first)
    raise KernelBug(f"first projection of {type(p).__name__}")


def vsnd(p: Value) -> Value:
    if isinstance(p, VPair):
        return p.second
    if isinstance(p, VNeutral) and isinstance(p.type, VSigma):
        return VNeutral(NSnd(p), p.type.second(vfst(p)))
    raise KernelBug(f"second projection of {type(p).__name__}")


def _stuck(name: str, levels, args: tuple, scrutinee: Value, ty: Value) -> Value:
    if not isinstance(scrutinee, VNeutral):
        raise KernelBug(f"{name} applied to non-canonical {type(scrutinee).__name__}")
    return VNeutral(NElim(name, levels, args, scrutinee), ty)


def fire(name: str, lv: tuple[LevelNF, ...], args: tuple) -> Value:
    """Compute a saturated built-in application."""
    match name:
        case "succ":
            return VSucc(args[0])
        case "Sum":
            return VSum(args[0], args[1], lv[0], lv[1])
        case "inl":
            return VInl(args[2], args[0], args[1], lv[0], lv[1])
        case "inr":
            return VInr(args[2], args[0], args[1], lv[0], lv[1])
        case "Id":
            return VId(args[0], args[1], args[2], lv[0])
        case "refl":
            return VRefl(args[0], args[1], lv[0])
        case "Lift":
            return VLift(args[0], lv[0], lv[1])
        case "lift":
            return VLiftIn(args[1], args[0], lv[0], lv[1])
        case "lower":
            x, l = args
            if isinstance(l, VLiftIn):
                _budget().tick()
                return l.value
            return _stuck(name, lv, (x,), l, x)
        case "natInd":
            return _nat_ind(lv, *args)
        case "emptyInd":
            motive, e = args
            return _stuck(name, lv, (motive,), e, apply(motive, e))
        case "unitInd":
            motive, a, x = args
            if isinstance(x, VStar):
                _budget().tick()
                return a
            return _stuck(name, lv, (motive, a), x, apply(motive, x))
        case "sumInd":
            x, y, motive, f, g, z = args
            if isinstance(z, VInl):
                _budget().tick()
                return apply(f, z.value)
            if isinstance(z, VInr):
                _budget().tick()
                return apply(g, z.value)
            return _stuck(name, lv, (x, y, motive, f, g), z, apply(motive, z))
        case "J":
            x_ty, motive, f, x, y, p = args
            if isinstance(p, VRefl):
                _budget().tick()
                return apply(f, x)
            return _stuck(name, lv, (x_ty, motive, f, x, y), p, apply_many(motive, x, y, p))
    raise KernelBug(f"unknown built-in {name}")


def _nat_ind(lv, motive: Value, base: Value, step: Value, n: Value) -> Value:
    chain = [n]
    while isinstance(chain[-1], VSucc):
        chain.append(chain[-1].pred)
    bottom = chain.pop()
    if isinstance(bottom, VZero):
        _budget().tick()
        acc = base
    else:
        acc = _stuck("natInd", lv, (motive, base, step), bottom, apply(motive, bottom))
    b = _budget()
    for m in reversed(chain):
        b.tick()
        acc = apply(apply(step, m.pred), acc)
    return acc


# ---------------------------------------------------------------------------
# readback

def _const(name: str, levels: tuple[LevelNF, ...] = ()) -> Const:
    return Const(name, tuple(l.to_level() for l in levels))


def quote(depth: int, v: Value, ty: Value) -> Term:
    """Read ``v : ty`` back as a beta-normal, eta-long term."""
    match ty:
        case VPi(name, dom, cod):
            x = fresh(depth, dom)
            hint = v.name if isinstance(v, VLam) else name
            return Lam(hint, quote(depth + 1, apply(v, x), cod(x)))
        case VSigma(_, first_ty, second_ty):
            a = vfst(v)
            return Pair(quote(depth, a, first_ty), quote(depth, vsnd(v), second_ty(a)))
        case VLift(inner, lu, lv):
            x = _lower(v, inner, lu, lv)
            return App(App(_const("lift", (lu, lv)), quote_type(depth, inner)), quote(depth, x, inner))
        case VUniverse():
            return quote_type(depth, v)
        case VNat():
            k = 0
            while isinstance(v, VSucc):
                k += 1
                v = v.pred
            t = _const("zero") if isinstance(v, VZero) else quote_neutral(depth, v)
            succ = _const("succ")
            for _ in range(k):
                t = App(succ, t)
            return t
        case VUnit():
            if isinstance(v, VStar):
                return _const("star")
        case VSum(left, right, lu, lv):
            if isinstance(v, (VInl, VInr)):
                name, payload_ty = ("inl", left) if isinstance(v, VInl) else ("inr", right)
                return App(
                    App(App(_const(name, (lu, lv)), quote_type(depth, left)), quote_type(depth, right)),
                    quote(depth, v.value, payload_ty),
                )
        case VId(a_ty, _, _, l):
            if isinstance(v, VRefl):
                return App(App(_const("refl", (l,)), quote_type(depth, a_ty)), quote(depth, v.point, a_ty))
    return quote_neutral(depth, v)


def _lower(v: Value, inner: Value, lu: LevelNF, lv: LevelNF) -> Value:
    return fire("lower", (lu, lv), (inner, v))


def quote_type(depth: int, v: Value) -> Term:
    match v:
        case VUniverse(l):
            return Universe(l.to_level())
        case VPi(name, dom, cod):
            x = fresh(depth, dom)
            return Pi(name, quote_type(depth, dom), quote_type(depth + 1, cod(x)))
        case VSigma(name, first, second):
            x = fresh(depth, first)
            return Sigma(name, quote_type(depth, first), quote_type(depth + 1, second(x)))
        case VNat():
            return _const("Nat")
        case VEmpty():
            return _const("Empty")
        case VUnit():
            return _const("Unit")
        case VSum(left, right, lu, lv):
            return App(App(_const("Sum", (lu, lv)), quote_type(depth, left)), quote_type(depth, right))
        case VId(a_ty, lhs, rhs, l):
            return App(
                App(App(_const("Id", (l,)), quote_type(depth, a_ty)), quote(depth, lhs, a_ty)),
                quote(depth, rhs, a_ty),
            )
        case VLift(inner, lu, lv):
            return App(_const("Lift", (lu, lv)), quote_type(depth, inner))
        case VNeutral():
            return quote_neutral(depth, v)
    raise KernelBug(f"not a type value: {type(v).__name__}")


def quote_neutral(depth: int, v: Value) -> Term:
    if not isinstance(v, VNeutral):
        raise KernelBug(f"expected a neutral, got {type(v).__name__}")
    match v.ne:
        case NVar(level):
            if not 0 <= level < depth:
                raise InternalScope(f"variable level {level} at depth {depth}")
            return Var(depth - 1 - level)
        case NConst(name, levels):
            return Ref(name, tuple(l.to_level() for l in levels))
        case NApp(fn, arg):
            fn_ty = fn.type
            if not isinstance(fn_ty, VPi):
                raise InternalNotAFunction("neutral application at non-Pi type")
            return App(quote_neutral(depth, fn), quote(depth, arg, fn_ty.domain))
        case NFst(p):
            return Fst(quote_neutral(depth, p))
        case NSnd(p):
            return Snd(quote_neutral(depth, p))
        case NElim(name, levels, args, scrutinee):
            t: Term = _const(name, levels)
            ty = builtin_type(name, levels)
            for a in args:
                if not isinstance(ty, VPi):
                    raise KernelBug(f"over-applied built-in {name}")
                t = App(t, quote(depth, a, ty.domain))
                ty = ty.codomain(a)
            return App(t, quote_neutral(depth, scrutinee))
    raise KernelBug(f"unknown neutral {v.ne!r}")


# ---------------------------------------------------------------------------
# conversion
#
# These mirror quote/quote_type step for step and answer whether the two
# readbacks would be syntactically equal, without building them.  Shared
# sub-values (cached globals, identical closures) are skipped by identity.

def _same_closure(c: Closure, d: Closure) -> bool:
    if c is d:
        return True
    if c.body is not d.body or c.env.levels != d.env.levels:
        return False
    xs, ys = c.env.vals, d.env.vals
    return len(xs) == len(ys) and all(x is y for x, y in zip(xs, ys))


def conv_value(depth: int, ty: Value, a: Value, b: Value) -> bool:
    """Decide whether ``a`` and ``b`` read back to the same term at ``ty``."""
    if a is b:
        return True
    match ty:
        case VPi(_, dom, cod):
            if isinstance(a, VLam) and isinstance(b, VLam) and _same_closure(a.body, b.body):
                return True
            x = fresh(depth, dom)
            return conv_value(depth + 1, cod(x), apply(a, x), apply(b, x))
        case VSigma(_, first_ty, second_ty):
            a1 = vfst(a)
            if not conv_value(depth, first_ty, a1, vfst(b)):
                return False
            return conv_value(depth, second_ty(a1), vsnd(a), vsnd(b))
        case VLift(inner, lu, lv):
            return conv_value(depth, inner, _lower(a, inner, lu, lv), _lower(b, inner, lu, lv))
        case VUniverse():
            return conv_type(depth, a, b)
        case VNat():
            while isinstance(a, VSucc) and isinstance(b, VSucc):
                a, b = a.pred, b.pred
                if a is b:
                    return True
            if isinstance(a, (VSucc, VZero)) or isinstance(b, (VSucc, VZero)):
                return isinstance(a, VZero) and isinstance(b, VZero)
        case VUnit():
            if isinstance(a, VStar) or isinstance(b, VStar):
                return isinstance(a, VStar) and isinstance(b, VStar)
        case VSum(left, right, _, _):
            if isinstance(a, VInl) and isinstance(b, VInl):
                return conv_value(depth, left, a.value, b.value)
            if isinstance(a, VInr) and isinstance(b, VInr):
                return conv_value(depth, right, a.value, b.value)
            if isinstance(a, (VInl, VInr)) or isinstance(b, (VInl, VInr)):
                return False
        case VId(a_ty, _, _, _):
            if isinstance(a, VRefl) and isinstance(b, VRefl):
                return conv_value(depth, a_ty, a.point, b.point)
            if isinstance(a, VRefl) or isinstance(b, VRefl):
                return False
    return conv_neutral(depth, a, b)


def conv_type(depth: int, a: Value, b: Value) -> bool:
    if a is b:
        return True
    match a:
        case VUniverse(l):
            return isinstance(b, VUniverse) and l == b.level
        case VPi(_, dom, cod):
            if not isinstance(b, VPi) or not conv_type(depth, dom, b.domain):
                return False
            if _same_closure(cod, b.codomain):
                return True
            x = fresh(depth, dom)
            return conv_type(depth + 1, cod(x), b.codomain(x))
        case VSigma(_, first, second):
            if not isinstance(b, VSigma) or not conv_type(depth, first, b.first):
                return False
            if _same_closure(second, b.second):
                return True
            x = fresh(depth, first)
            return conv_type(depth + 1, second(x), b.second(x))
        case VNat() | VEmpty() | VUnit():
            return type(a) is type(b)
        case VSum(left, right, lu, lv):
            return (isinstance(b, VSum) and lu == b.lu and lv == b.lv
                    and conv_type(depth, left, b.left) and conv_type(depth, right, b.right))
        case VId(a_ty, lhs, rhs, l):
            return (isinstance(b, VId) and l == b.level and conv_type(depth, a_ty, b.type)
                    and conv_value(depth, a_ty, lhs, b.lhs) and conv_value(depth, a_ty, rhs, b.rhs))
        case VLift(inner, lu, lv):
            return isinstance(b, VLift) and lu == b.lu and lv == b.lv and conv_type(depth, inner, b.inner)
        case VNeutral():
            return isinstance(b, VNeutral) and conv_neutral(depth, a, b)
    raise KernelBug(f"not a type value: {type(a).__name__}")


def conv_neutral(depth: int, a: Value, b: Value) -> bool:
    if not isinstance(a, VNeutral) or not isinstance(b, VNeutral):
        if isinstance(a, VNeutral) or isinstance(b, VNeutral):
            return False
        raise KernelBug(f"expected a neutral, got {type(a).__name__}")
    if a is b:
        return True
    x, y = a.ne, b.ne
    if type(x) is not type(y):
        return False
    match x:
        case NVar(level):
            return level == y.level
        case NConst(name, levels):
            return name == y.name and levels == y.levels
        case NApp(fn, arg):
            fn_ty = fn.type
            if not isinstance(fn_ty, VPi):
                raise InternalNotAFunction("neutral application at non-Pi type")
            return conv_neutral(depth, fn, y.fn) and conv_value(depth, fn_ty.domain, arg, y.arg)
        case NFst(p) | NSnd(p):
            return conv_neutral(depth, p, y.pair)
        case NElim(name, levels, args, scrutinee):
            if name != y.name or levels != y.levels or len(args) != len(y.args):
                return False
            if not conv_neutral(depth, scrutinee, y.scrutinee):
                return False
            ty = builtin_type(name, levels)
            for s, t in zip(args, y.args):
                if not isinstance(ty, VPi):
                    raise KernelBug(f"over-applied built-in {name}")
                if not conv_value(depth, ty.domain, s, t):
                    return False
                ty = ty.codomain(s)
            return True
    raise KernelBug(f"unknown neutral {x!r}")


# ---------------------------------------------------------------------------
# contexts

@dataclass(frozen=True)
class Context:
    """A typing telescope: binder names, their types, and fresh variables."""

    names: tuple[str, ...] = ()
    types: tuple = ()
    vals: tuple = ()
    level_params: frozenset = field(default_factory=frozenset)

    @property
    def depth(self) -> int:
        return len(self.names)

    def bind(self, name: str, ty: Value) -> tuple["Context", VNeutral]:
        x = fresh(self.depth, ty)
        return Context(self.names + (name,), self.types + (ty,), self.vals + (x,), self.level_params), x

    def env(self, genv: GlobalEnv) -> Env:
        return Env(self.vals, {}, genv)

    def lookup(self, index: int) -> Optional[Value]:
        if 0 <= index < self.depth:
            return self.types[self.depth - 1 - index]
        return None


def evaluate(ctx: Context, genv: GlobalEnv, t: Term) -> Value:
    return eval_term(ctx.env(genv), t)


def normalize(ctx: Context, genv: GlobalEnv, t: Term, ty: Value) -> Term:
    return quote(ctx.depth, evaluate(ctx, genv, t), ty)
