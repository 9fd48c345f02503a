"""Golden-outcome harness for the ``.mltt`` corpus.

``corpus.manifest`` has one tab-separated line per entry::

    path  tier  expected  name  normal-form  unsafe  [preludes]

``expected`` is ``accept``, ``reject:<ErrorClass>`` or ``normal-form``;
unused columns hold ``-``.  ``unsafe`` is ``unsafe`` when the file needs
assumptions (it must then fail under ``--safe`` with ``UnsafeAssume``).
The optional seventh column lists comma-separated prelude paths.
Paths are relative to the manifest's directory.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cli import RunConfig, run

TIERS = ("1", "2", "3", "NEG")


@dataclass(frozen=True)
class CorpusEntry:
    path: str
    tier: str
    expected: str  # accept | reject | normal-form
    error_class: Optional[str] = None
    name: Optional[str] = None
    normal_form: Optional[str] = None
    requires_unsafe: bool = False
    preludes: tuple[str, ...] = ()


@dataclass
class EntryResult:
    entry: CorpusEntry
    passed: bool
    detail: str
    seconds: float
    declarations: int = 0
    notes: list[str] = field(default_factory=list)


class ManifestError(ValueError):
    pass


def _opt(s: str) -> Optional[str]:
    return None if s in ("", "-") else s


def parse_manifest(text: str, base: str = ".") -> list[CorpusEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (6, 7):
            raise ManifestError(f"line {lineno}: expected 6 or 7 tab-separated columns")
        path, tier, expected, name, nf, unsafe = cols[:6]
        if tier not in TIERS:
            raise ManifestError(f"line {lineno}: unknown tier {tier!r}")
        error_class = None
        if expected.startswith("reject:"):
            expected, error_class = "reject", expected.split(":", 1)[1]
        if expected not in ("accept", "reject", "normal-form"):
            raise ManifestError(f"line {lineno}: unknown expectation {expected!r}")
        if tier == "NEG" and expected != "reject":
            raise ManifestError(f"line {lineno}: NEG entries must expect a rejection")
        if expected == "normal-form" and (_opt(name) is None or _opt(nf) is None):
            raise ManifestError(f"line {lineno}: normal-form entries need a name and a form")
        if unsafe not in ("safe", "unsafe"):
            raise ManifestError(f"line {lineno}: unsafe flag must be 'safe' or 'unsafe'")
        preludes = ()
        if len(cols) == 7 and _opt(cols[6]):
            preludes = tuple(os.path.join(base, p) for p in cols[6].split(","))
        entries.append(CorpusEntry(
            os.path.join(base, path), tier, expected, error_class, _opt(name), _opt(nf),
            unsafe == "unsafe", preludes,
        ))
    return entries


def load_manifest(path: str) -> list[CorpusEntry]:
    with open(path, encoding="utf-8") as f:
        return parse_manifest(f.read(), os.path.dirname(os.path.abspath(path)))


def run_entry(entry: CorpusEntry) -> EntryResult:
    start = time.perf_counter()
    safe = not entry.requires_unsafe
    report = run(RunConfig("check", [entry.path], safe=safe, preludes=list(entry.preludes)))
    notes: list[str] = []
    ndecls = 0
    if report.status == 0:
        ndecls = int(report.lines[-1].split()[1])

    if entry.expected == "reject":
        got = report.error.kind if report.error else "accepted"
        passed = got == entry.error_class
        detail = f"expected {entry.error_class}, got {got}"
    else:
        passed = report.status == 0
        detail = "accepted" if passed else " | ".join(report.lines)
        if passed and entry.expected == "normal-form":
            ev = run(RunConfig("eval", [entry.path], entry.name, safe=safe, preludes=list(entry.preludes)))
            printed = " ".join(ev.lines)
            passed = ev.status == 0 and printed == entry.normal_form
            detail = f"{entry.name} = {printed} (expected {entry.normal_form})"
        if passed and entry.requires_unsafe:
            strict = run(RunConfig("check", [entry.path], safe=True, preludes=list(entry.preludes)))
            got = strict.error.kind if strict.error else "accepted"
            passed = got == "UnsafeAssume"
            notes.append(f"--safe: {got}")
    return EntryResult(entry, passed, detail, time.perf_counter() - start, ndecls, notes)


def _run_entry_deep(entry: CorpusEntry) -> EntryResult:
    from .cli import run_deep

    return run_deep(run_entry, entry)


def run_corpus(
    entries: Iterable[CorpusEntry], tiers: Optional[Iterable[str]] = None, jobs: int = 1,
) -> list[EntryResult]:
    """Run the selected entries; results always follow manifest order."""
    wanted = set(tiers) if tiers else None
    chosen = [e for e in entries if wanted is None or e.tier in wanted]
    if jobs <= 1 or len(chosen) <= 1:
        return [run_entry(e) for e in chosen]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_entry_deep, chosen))


def format_report(results: list[EntryResult]) -> str:
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        extra = f" [{'; '.join(r.notes)}]" if r.notes else ""
        lines.append(f"{mark} tier {r.entry.tier:<3} {r.entry.path} ({r.seconds:.2f}s) {r.detail}{extra}")
    npass = sum(r.passed for r in results)
    lines.append(f"{npass}/{len(results)} entries passed")
    return "\n".join(lines)
