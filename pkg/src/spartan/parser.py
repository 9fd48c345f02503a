"""Lexer and recursive-descent parser for ``.mltt`` source files.

Grammar (layout-free)::

    module  ::= decl*
    decl    ::= 'def' NAME params? tele* ':' term ':=' term
              | 'assume' NAME params? tele* ':' term
    params  ::= '{' NAME* '}'
    tele    ::= '(' NAME+ ':' term ')'
    term    ::= '\\' NAME+ '->' term
              | tele+ '->' term | tele+ '*' prod ['->' term]
              | prod ['->' term]
    prod    ::= tele+ '*' prod | app ['*' prod]
    app     ::= atom+
    atom    ::= NAME ['{' level,* '}'] | NUMBER | 'U' level-atom
              | 'fst' atom | 'snd' atom
              | '(' term ')' | '(' term ',' term ... ')' | '(' term ':' term ')'
    level   ::= 'lsuc' level-atom | 'lmax' level-atom level-atom | level-atom
    level-atom ::= 'lzero' | NAME | NUMBER | '(' level ')'

Numerals desugar to ``succ`` chains and local names resolve to indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .builtins import BUILTINS
from .errors import ParseError
from .levels import LMax, LSuc, LVar, LZero, Level, level_from_int
from .syntax import (
    App, Ascribe, Assume, Const, Declaration, Def, Fst, Lam, Pair, Pi, Ref, Sigma, Snd, Span,
    Term, Universe, Var, numeral,
)

KEYWORDS = frozenset({"def", "assume", "U", "fst", "snd", "lzero", "lsuc", "lmax"})
RESERVED = KEYWORDS | frozenset(BUILTINS)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
  | (?P<number>[0-9]+)
  | (?P<sym>:=|->|[(){},:*\\])
    """,
    re.VERBOSE,
)

_OPEN = {"(": ")", "{": "}"}
_CLOSE = {")": "(", "}": "{"}


@dataclass(frozen=True)
class Token:
    kind: str  # name | number | sym | eof
    text: str
    span: Span


@dataclass(frozen=True)
class SourceModule:
    path: str
    declarations: tuple[Declaration, ...]


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("name", "number", "sym"):
            tokens.append(Token(kind, chunk, span))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    _check_balanced(tokens)
    return tokens


def _check_balanced(tokens: list[Token]) -> None:
    stack: list[Token] = []
    for tok in tokens:
        if tok.kind != "sym":
            continue
        if tok.text in _OPEN:
            stack.append(tok)
        elif tok.text in _CLOSE:
            if not stack or stack[-1].text != _CLOSE[tok.text]:
                raise ParseError(f"unbalanced {tok.text!r}", tok.span)
            stack.pop()
    if stack:
        raise ParseError(f"unclosed {stack[-1].text!r}", stack[-1].span)


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.scope: list[Optional[str]] = []

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "name") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.span)

    def binder_name(self) -> str:
        t = self.tok
        if t.kind != "name":
            self.fail("expected a name")
        if t.text in RESERVED:
            self.fail(f"reserved word {t.text!r} cannot be used as a name")
        self.advance()
        return t.text

    # -- declarations ------------------------------------------------------

    def module(self) -> list[Declaration]:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.declaration())
        return decls

    def declaration(self) -> Declaration:
        start = self.tok
        if not (self.at("def") or self.at("assume")):
            self.fail("expected 'def' or 'assume'")
        self.advance()
        name = self.binder_name()
        params: list[str] = []
        if self.at("{"):
            self.advance()
            while not self.at("}"):
                p = self.binder_name()
                if p in params:
                    self.fail(f"duplicate level parameter {p!r}", self.peek(-1))
                params.append(p)
                if self.at(","):
                    self.advance()
            self.advance()
        groups = []
        while self.at("("):
            groups.extend(self.telescope_group())
        self.expect(":")
        ty = self.term()
        for _ in groups:
            self.scope.pop()
        ty = _close(Pi, groups, ty)
        if start.text == "assume":
            return Assume(name, tuple(params), ty, span=start.span)
        self.expect(":=")
        self.scope.extend(n for n, _, _ in groups)
        body = self.term()
        for n, _, span in reversed(groups):
            self.scope.pop()
            body = Lam(n, body, span=span)
        return Def(name, tuple(params), ty, body, span=start.span)

    # -- terms ---------------------------------------------------------------

    def telescope_end(self) -> Optional[str]:
        """If a telescope ``(x ... : A) ...`` starts here, the token after it."""
        i = self.pos
        seen = False
        while True:
            t = self.tokens[i]
            if not (t.kind == "sym" and t.text == "("):
                break
            j = i + 1
            while self.tokens[j].kind == "name" and self.tokens[j].text not in RESERVED:
                j += 1
            if j == i + 1 or not (self.tokens[j].kind == "sym" and self.tokens[j].text == ":"):
                break
            depth = 1
            j += 1
            while depth:
                t = self.tokens[j]
                if t.kind == "eof":
                    return None
                if t.kind == "sym" and t.text in "({":
                    depth += 1
                elif t.kind == "sym" and t.text in ")}":
                    depth -= 1
                j += 1
            i = j
            seen = True
        if not seen:
            return None
        t = self.tokens[i]
        return t.text if t.kind == "sym" and t.text in ("->", "*") else None

    def telescope_group(self) -> list[tuple[str, Term, Span]]:
        """Parse ``(x y : A)``, pushing the names onto the scope."""
        self.expect("(")
        names = []
        while self.tok.kind == "name" and not self.at(":"):
            names.append((self.binder_name(), self.peek(-1).span))
        if not names:
            self.fail("expected a name")
        self.expect(":")
        out = []
        for k, (n, span) in enumerate(names):
            ty = self.term() if k == 0 else None
            if k == 0:
                self.expect(")")
                first_ty = ty
            else:
                first_ty = _shift(first_ty, 1)
            out.append((n, first_ty, span))
            self.scope.append(n)
        return out

    def telescope(self) -> list[tuple[str, Term, Span]]:
        groups = []
        while self.at("("):
            groups.extend(self.telescope_group())
        return groups

    def term(self) -> Term:
        if self.at("\\"):
            start = self.advance()
            names = []
            while not self.at("->"):
                names.append(self.binder_name())
            if not names:
                self.fail("expected a name after '\\'")
            self.advance()
            self.scope.extend(names)
            body = self.term()
            for n in reversed(names):
                self.scope.pop()
                body = Lam(n, body, span=start.span)
            return body
        end = self.telescope_end()
        if end == "->":
            groups = self.telescope()
            self.expect("->")
            body = self.term()
            del self.scope[len(self.scope) - len(groups):]
            return _close(Pi, groups, body)
        if end == "*":
            left = self.sigma_telescope()
        else:
            left = self.prod()
        if self.at("->"):
            self.advance()
            self.scope.append(None)
            right = self.term()
            self.scope.pop()
            return Pi("_", left, right, span=_span_of(left))
        return left

    def sigma_telescope(self) -> Term:
        groups = self.telescope()
        self.expect("*")
        body = self.prod()
        del self.scope[len(self.scope) - len(groups):]
        return _close(Sigma, groups, body)

    def prod(self) -> Term:
        if self.telescope_end() == "*":
            return self.sigma_telescope()
        left = self.app()
        if self.at("*"):
            self.advance()
            self.scope.append(None)
            right = self.prod()
            self.scope.pop()
            return Sigma("_", left, right, span=_span_of(left))
        return left

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("name", "number"):
            return t.text not in ("def", "assume", "lzero", "lsuc", "lmax")
        return t.kind == "sym" and t.text == "("

    def app(self) -> Term:
        if not self.starts_atom():
            self.fail("expected a term")
        head = self.atom()
        while self.starts_atom():
            arg = self.atom()
            head = App(head, arg, span=_span_of(head))
        return head

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return _with_span(numeral(int(t.text)), t.span)
        if t.kind == "name":
            if t.text == "U":
                self.advance()
                return Universe(self.universe_level(t), span=t.span)
            if t.text in ("fst", "snd"):
                self.advance()
                if not self.starts_atom():
                    self.fail(f"{t.text} expects an argument")
                arg = self.atom()
                return (Fst if t.text == "fst" else Snd)(arg, span=t.span)
            return self.name_ref()
        if self.at("("):
            return self.parens()
        self.fail("expected a term")

    def name_ref(self) -> Term:
        t = self.advance()
        if t.text in KEYWORDS:
            self.fail(f"unexpected keyword {t.text!r}", t)
        levels: Optional[tuple[Level, ...]] = None
        if self.at("{"):
            self.advance()
            ls = []
            while not self.at("}"):
                ls.append(self.level())
                if not self.at("}"):
                    self.expect(",")
            self.advance()
            levels = tuple(ls)
        for k in range(len(self.scope) - 1, -1, -1):
            if self.scope[k] == t.text:
                if levels is not None:
                    self.fail(f"local variable {t.text!r} takes no level arguments", t)
                return Var(len(self.scope) - 1 - k, span=t.span)
        if t.text in BUILTINS:
            return Const(t.text, levels or (), span=t.span)
        return Ref(t.text, levels or (), span=t.span)

    def parens(self) -> Term:
        open_tok = self.expect("(")
        inner = self.term()
        if self.at(","):
            items = [inner]
            while self.at(","):
                self.advance()
                items.append(self.term())
            self.expect(")")
            out = items[-1]
            for item in reversed(items[:-1]):
                out = Pair(item, out, span=open_tok.span)
            return out
        if self.at(":"):
            self.advance()
            ty = self.term()
            self.expect(")")
            return Ascribe(inner, ty, span=open_tok.span)
        self.expect(")")
        return inner

    # -- levels ----------------------------------------------------------------

    def universe_level(self, u_tok: Token) -> Level:
        if self.at("{"):
            self.advance()
            l = self.level()
            self.expect("}")
            return l
        if self.at("lsuc") or self.at("lmax"):
            return self.level()
        t = self.tok
        if t.kind == "number" or self.at("lzero") or self.at("(") or (
            t.kind == "name" and t.text not in RESERVED
        ):
            return self.level_atom()
        self.fail("U requires a level argument")

    def level(self) -> Level:
        if self.at("lsuc"):
            self.advance()
            return LSuc(self.level_atom())
        if self.at("lmax"):
            self.advance()
            a = self.level_atom()
            return LMax(a, self.level_atom())
        return self.level_atom()

    def level_atom(self) -> Level:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return level_from_int(int(t.text))
        if self.at("lzero"):
            self.advance()
            return LZero()
        if self.at("("):
            self.advance()
            l = self.level()
            self.expect(")")
            return l
        if t.kind == "name" and t.text not in RESERVED:
            self.advance()
            return LVar(t.text)
        self.fail("expected a level")


def _span_of(t: Term) -> Optional[Span]:
    return getattr(t, "span", None)


def _with_span(t: Term, span: Span) -> Term:
    if isinstance(t, App):
        return App(t.fn, t.arg, span=span)
    if isinstance(t, Const):
        return Const(t.name, t.levels, span=span)
    return t


def _close(kind, groups, body: Term) -> Term:
    for name, ty, span in reversed(groups):
        body = kind(name, ty, body, span=span)
    return body


def _shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Shift free variables (index >= cutoff) of ``t`` by ``by``."""
    match t:
        case Var(i):
            return Var(i + by, span=t.span) if i >= cutoff else t
        case Pi(n, d, c):
            return Pi(n, _shift(d, by, cutoff), _shift(c, by, cutoff + 1), span=t.span)
        case Sigma(n, d, c):
            return Sigma(n, _shift(d, by, cutoff), _shift(c, by, cutoff + 1), span=t.span)
        case Lam(n, b):
            return Lam(n, _shift(b, by, cutoff + 1), span=t.span)
        case App(f, a):
            return App(_shift(f, by, cutoff), _shift(a, by, cutoff), span=t.span)
        case Pair(p, q):
            return Pair(_shift(p, by, cutoff), _shift(q, by, cutoff), span=t.span)
        case Fst(p):
            return Fst(_shift(p, by, cutoff), span=t.span)
        case Snd(p):
            return Snd(_shift(p, by, cutoff), span=t.span)
        case Ascribe(a, b):
            return Ascribe(_shift(a, by, cutoff), _shift(b, by, cutoff), span=t.span)
    return t


def parse_module(text: str, path: str = "<input>") -> SourceModule:
    p = Parser(text)
    return SourceModule(path, tuple(p.module()))


def parse_term(text: str) -> Term:
    """Parse a single term in the empty local scope."""
    p = Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return t


def parse_file(path: str) -> SourceModule:
    with open(path, encoding="utf-8") as f:
        return parse_module(f.read(), path)
