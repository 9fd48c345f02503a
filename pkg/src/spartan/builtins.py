"""The hard-coded type formers, constructors and eliminators.

Each entry gives the level parameters, the number of explicit arguments
after which the constant computes, and its type in surface syntax.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import Term


@dataclass(frozen=True)
class Builtin:
    name: str
    level_params: tuple[str, ...]
    arity: int
    source: str


_TABLE = [
    Builtin("Nat", (), 0, "U lzero"),
    Builtin("zero", (), 0, "Nat"),
    Builtin("succ", (), 1, "Nat -> Nat"),
    Builtin(
        "natInd", ("u",), 4,
        "(A : Nat -> U u) -> A zero -> ((n : Nat) -> A n -> A (succ n)) -> (n : Nat) -> A n",
    ),
    Builtin("Empty", (), 0, "U lzero"),
    Builtin("emptyInd", ("u",), 2, "(A : Empty -> U u) -> (e : Empty) -> A e"),
    Builtin("Unit", (), 0, "U lzero"),
    Builtin("star", (), 0, "Unit"),
    Builtin("unitInd", ("u",), 3, "(A : Unit -> U u) -> A star -> (x : Unit) -> A x"),
    Builtin("Sum", ("u", "v"), 2, "U u -> U v -> U (lmax u v)"),
    Builtin("inl", ("u", "v"), 3, "(X : U u) -> (Y : U v) -> X -> Sum {u, v} X Y"),
    Builtin("inr", ("u", "v"), 3, "(X : U u) -> (Y : U v) -> Y -> Sum {u, v} X Y"),
    Builtin(
        "sumInd", ("u", "v", "w"), 6,
        "(X : U u) -> (Y : U v) -> (A : Sum {u, v} X Y -> U w)"
        " -> ((x : X) -> A (inl {u, v} X Y x))"
        " -> ((y : Y) -> A (inr {u, v} X Y y))"
        " -> (z : Sum {u, v} X Y) -> A z",
    ),
    Builtin("Id", ("u",), 3, "(X : U u) -> X -> X -> U u"),
    Builtin("refl", ("u",), 2, "(X : U u) -> (x : X) -> Id {u} X x x"),
    Builtin(
        "J", ("u", "v"), 6,
        "(X : U u) -> (A : (x : X) -> (y : X) -> Id {u} X x y -> U v)"
        " -> ((x : X) -> A x x (refl {u} X x))"
        " -> (x : X) -> (y : X) -> (p : Id {u} X x y) -> A x y p",
    ),
    Builtin("Lift", ("u", "v"), 1, "U u -> U (lmax u v)"),
    Builtin("lift", ("u", "v"), 2, "(X : U u) -> X -> Lift {u, v} X"),
    Builtin("lower", ("u", "v"), 2, "(X : U u) -> Lift {u, v} X -> X"),
]

BUILTINS: dict[str, Builtin] = {b.name: b for b in _TABLE}

ELIMINATORS = frozenset({"natInd", "emptyInd", "unitInd", "sumInd", "J", "lower"})


@lru_cache(maxsize=None)
def builtin_type_term(name: str) -> Term:
    from .parser import parse_term

    return parse_term(BUILTINS[name].source)
