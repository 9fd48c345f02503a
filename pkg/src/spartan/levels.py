"""Universe levels: expression trees and their max-plus normal form.

A level denotes a natural number once its variables are assigned.  Every
level expression normalizes to ``max(const, v1 + k1, ..., vn + kn)``; two
expressions are equal for all assignments exactly when their normal forms
coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union


@dataclass(frozen=True, slots=True)
class LZero:
    pass


@dataclass(frozen=True, slots=True)
class LVar:
    name: str


@dataclass(frozen=True, slots=True)
class LSuc:
    arg: "Level"


@dataclass(frozen=True, slots=True)
class LMax:
    left: "Level"
    right: "Level"


Level = Union[LZero, LVar, LSuc, LMax]


@dataclass(frozen=True, slots=True)
class LevelNF:
    """``max(const, max(var + offset))`` with ``const`` as small as possible.

    Variables range over naturals, so an atom ``v + k`` is never below
    ``k``; the constant is kept only when it exceeds every offset.
    """

    const: int = 0
    atoms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def make(cls, const: int, atoms: Mapping[str, int]) -> "LevelNF":
        if atoms and const <= max(atoms.values()):
            const = 0
        return cls(const, tuple(sorted(atoms.items())))

    def suc(self, k: int = 1) -> "LevelNF":
        return LevelNF.make(self.const + k, {v: o + k for v, o in self.atoms})

    def join(self, other: "LevelNF") -> "LevelNF":
        atoms = dict(self.atoms)
        for v, o in other.atoms:
            atoms[v] = max(o, atoms.get(v, o))
        return LevelNF.make(max(self.const, other.const), atoms)

    def subst(self, assignment: Mapping[str, "LevelNF"]) -> "LevelNF":
        out = LevelNF(self.const)
        for v, o in self.atoms:
            image = assignment.get(v)
            out = out.join(LevelNF.make(0, {v: o}) if image is None else image.suc(o))
        return out

    def denote(self, assignment: Mapping[str, int]) -> int:
        return max([self.const] + [assignment[v] + o for v, o in self.atoms])

    def variables(self) -> set[str]:
        return {v for v, _ in self.atoms}

    def to_level(self) -> Level:
        parts: list[Level] = []
        for v, o in self.atoms:
            parts.append(_sucs(LVar(v), o))
        if self.const or not parts:
            parts.insert(0, _sucs(LZero(), self.const))
        out = parts[0]
        for p in parts[1:]:
            out = LMax(out, p)
        return out


ZERO_NF = LevelNF()


def _sucs(level: Level, k: int) -> Level:
    for _ in range(k):
        level = LSuc(level)
    return level


def level_normalize(level: Level) -> LevelNF:
    match level:
        case LZero():
            return ZERO_NF
        case LVar(name):
            return LevelNF(0, ((name, 0),))
        case LSuc(arg):
            return level_normalize(arg).suc()
        case LMax(left, right):
            return level_normalize(left).join(level_normalize(right))
    raise TypeError(f"not a level: {level!r}")


def level_equal(a: Level, b: Level) -> bool:
    return level_normalize(a) == level_normalize(b)


def denote(level: Level, assignment: Mapping[str, int]) -> int:
    """Direct recursive interpretation, independent of the normal form."""
    match level:
        case LZero():
            return 0
        case LVar(name):
            return assignment[name]
        case LSuc(arg):
            return denote(arg, assignment) + 1
        case LMax(left, right):
            return max(denote(left, assignment), denote(right, assignment))
    raise TypeError(f"not a level: {level!r}")


def level_vars(level: Level) -> set[str]:
    match level:
        case LVar(name):
            return {name}
        case LSuc(arg):
            return level_vars(arg)
        case LMax(left, right):
            return level_vars(left) | level_vars(right)
    return set()


def level_from_int(n: int) -> Level:
    return _sucs(LZero(), n)
