"""The global table of checked definitions and assumptions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .syntax import Span, Term


@dataclass(eq=False)
class GlobalEntry:
    name: str
    level_params: tuple[str, ...]
    type: Term
    body: Optional[Term]  # None for assumptions
    span: Optional[Span] = None
    # values of the body/type per level instantiation; never observable
    value_cache: dict = field(default_factory=dict, repr=False)
    type_cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_assumption(self) -> bool:
        return self.body is None


class GlobalEnv:
    """An immutable snapshot; :meth:`extend` returns a new snapshot."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[dict[str, GlobalEntry]] = None):
        self._entries = dict(entries or {})

    def extend(self, entry: GlobalEntry) -> "GlobalEnv":
        if entry.name in self._entries:
            raise ValueError(f"duplicate global {entry.name}")
        new = dict(self._entries)
        new[entry.name] = entry
        return GlobalEnv(new)

    def lookup(self, name: str) -> Optional[GlobalEntry]:
        return self._entries.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[GlobalEntry]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)
