import sys
from functools import lru_cache
from pathlib import Path

import pytest

from spartan.cli import load_file, run_deep
from spartan.corpus import load_manifest
from spartan.env import GlobalEnv

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
MANIFEST = CORPUS / "corpus.manifest"

sys.path.insert(0, str(Path(__file__).parent))


@lru_cache(maxsize=None)
def load_chain(paths: tuple[str, ...]) -> GlobalEnv:
    """Check ``paths`` in order and return the resulting environment (memoized by prefix)."""
    if not paths:
        return GlobalEnv()
    genv = load_chain(paths[:-1])
    return run_deep(lambda: load_file(paths[-1], genv, False, 1_000_000)[0])


def accepted_files() -> list[tuple[str, tuple[str, ...]]]:
    """Distinct accepted corpus files with their preludes, in manifest order."""
    seen, out = set(), []
    for e in load_manifest(str(MANIFEST)):
        if e.expected == "reject" or e.path in seen:
            continue
        seen.add(e.path)
        out.append((e.path, e.preludes))
    return out


def corpus_definitions():
    """Yield ``(path, entry, genv)`` for every declaration a corpus file adds."""
    for path, preludes in accepted_files():
        before = load_chain(tuple(preludes))
        genv = load_chain(tuple(preludes) + (path,))
        for entry in genv:
            if entry.name not in before:
                yield path, entry, genv


@pytest.fixture(scope="session")
def deep():
    return run_deep
