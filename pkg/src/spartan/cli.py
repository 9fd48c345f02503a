"""Command-line driver.

    spartan check [--safe] [--max-depth N] [--prelude P]... FILE...
    spartan eval  [--safe] [--max-depth N] [--prelude P]... FILE TERM
    spartan type  [--safe] [--max-depth N] [--prelude P]... FILE TERM
    spartan corpus [--tier T]... [--jobs N] MANIFEST

Exit status: 0 on success, 1 on a type or parse error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .checker import check_decl, infer_closed, normalize_closed
from .env import GlobalEnv
from .errors import SpartanError
from .evaluator import DEFAULT_BUDGET
from .parser import parse_module, parse_term
from .printer import print_term

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str  # check | eval | type
    paths: list[str]
    term: Optional[str] = None
    safe: bool = False
    max_depth: int = DEFAULT_BUDGET
    preludes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.max_depth < 1:
            raise UsageError("--max-depth must be at least 1")


@dataclass
class Report:
    status: int = EXIT_OK
    lines: list[str] = field(default_factory=list)
    error: Optional[SpartanError] = None

    def fail(self, err: SpartanError, path: str) -> None:
        self.status = EXIT_ERROR
        self.error = err
        where = f"{path}:{err.span}" if err.span else path
        self.lines.append(f"ERROR {err.kind} at {where}")
        if err.decl:
            self.lines.append(f"  in declaration {err.decl}")
        self.lines.extend(f"  {line}" for line in err.details())


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_file(path: str, genv: GlobalEnv, safe: bool, max_depth: int) -> tuple[GlobalEnv, int]:
    """Check every declaration of ``path`` on top of ``genv``."""
    module = parse_module(_read(path), path)
    for d in module.declarations:
        genv = check_decl(genv, d, safe, max_depth)
    return genv, len(module.declarations)


def _load_preludes(config: RunConfig, report: Report) -> Optional[GlobalEnv]:
    genv = GlobalEnv()
    for p in config.preludes:
        try:
            genv, _ = load_file(p, genv, config.safe, config.max_depth)
        except SpartanError as err:
            report.fail(err, p)
            return None
    return genv


def run(config: RunConfig) -> Report:
    report = Report()
    genv = _load_preludes(config, report)
    if genv is None:
        return report
    if config.command == "check":
        for path in config.paths:
            try:
                _, n = load_file(path, genv, config.safe, config.max_depth)
            except SpartanError as err:
                report.fail(err, path)
                continue
            report.lines.append(f"OK {n} declarations in {path}")
        return report

    (path,) = config.paths
    try:
        genv, _ = load_file(path, genv, config.safe, config.max_depth)
    except SpartanError as err:
        report.fail(err, path)
        return report
    try:
        term = parse_term(config.term or "")
        if config.command == "eval":
            nf, _ = normalize_closed(genv, term, config.max_depth)
            report.lines.append(print_term(nf))
        else:
            _, ty = infer_closed(genv, term, config.max_depth)
            from .evaluator import quote_type

            report.lines.append(print_term(quote_type(0, ty)))
    except SpartanError as err:
        report.fail(err, "<term>")
    return report


def run_deep(fn: Callable, *args):
    """Run ``fn`` on a thread with a large stack; deep terms recurse deeply."""
    result: list = []
    error: list = []

    def target():
        try:
            result.append(fn(*args))
        except BaseException as e:  # re-raised on the calling thread
            error.append(e)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 200_000))
    old_size = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if error:
        raise error[0]
    return result[0]


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spartan", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--safe", action="store_true", help="reject assumptions")
        p.add_argument("--max-depth", type=int, default=DEFAULT_BUDGET, metavar="N",
                       help="eliminator-firing budget per declaration")
        p.add_argument("--prelude", action="append", default=[], metavar="PATH")

    p = sub.add_parser("check", help="type-check files")
    common(p)
    p.add_argument("files", nargs="+")
    for name, help_ in (("eval", "print the normal form of a term"), ("type", "print the type of a term")):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument("file")
        p.add_argument("term")
    p = sub.add_parser("corpus", help="run a corpus manifest")
    p.add_argument("manifest")
    p.add_argument("--tier", action="append", default=None)
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="run entries in N processes")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "corpus":
            from .corpus import ManifestError, format_report, load_manifest, run_corpus

            try:
                entries = load_manifest(args.manifest)
            except OSError as e:
                raise UsageError(f"cannot read {args.manifest}: {e.strerror}") from None
            except ManifestError as e:
                raise UsageError(f"{args.manifest}: {e}") from None
            if args.jobs < 1:
                raise UsageError("--jobs must be at least 1")
            results = run_deep(run_corpus, entries, args.tier, args.jobs)
            print(format_report(results))
            return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR
        paths = args.files if args.command == "check" else [args.file]
        config = RunConfig(args.command, paths, getattr(args, "term", None), args.safe,
                           args.max_depth, args.prelude)
        report = run_deep(run, config)
    except UsageError as e:
        print(f"spartan: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    for line in report.lines:
        print(line)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
