"""Term syntax for string diagrams.

Grammar::

    term   := par (';' par)*
    par    := atom ('*' atom)*
    atom   := '(' term ')' | prim '[' args ']' | NAME
    prim   := id | swap | mu | delta | eps | get | set | chi
    args   := NAME (',' NAME)*

``*`` (tensor) binds tighter than ``;`` (sequential composition).  A
``copy`` attribute is written ``copy:<Data>`` inside ``get``/``set``/``chi``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

PRIMS = ("id", "swap", "mu", "delta", "eps", "get", "set", "chi")


class TermSyntaxError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Prim:
    op: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Seq:
    parts: tuple["Term", ...]


@dataclass(frozen=True)
class Par:
    parts: tuple["Term", ...]


Term = Union[Prim, Gen, Seq, Par]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*(?::[A-Za-z_][A-Za-z0-9_']*)?)|(?P<sym>[()\[\];*,]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise TermSyntaxError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = "name" if m.group("name") else "sym"
        val = m.group(kind)
        toks.append((kind, val, col0 + m.start(kind)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, line: int, col0: int):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.end_col = col0 + len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, sym: str | None = None):
        t = self.peek()
        if t is None:
            raise TermSyntaxError("unexpected end of term", self.line, self.end_col)
        if sym is not None and t[1] != sym:
            raise TermSyntaxError(f"expected {sym!r}, got {t[1]!r}", self.line, t[2])
        self.i += 1
        return t

    def term(self) -> Term:
        parts = [self.par()]
        while self.peek() is not None and self.peek()[1] == ";":
            self.take(";")
            parts.append(self.par())
        return parts[0] if len(parts) == 1 else Seq(tuple(parts))

    def par(self) -> Term:
        parts = [self.atom()]
        while self.peek() is not None and self.peek()[1] == "*":
            self.take("*")
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else Par(tuple(parts))

    def atom(self) -> Term:
        t = self.take()
        if t[1] == "(":
            inner = self.term()
            self.take(")")
            return inner
        if t[0] != "name":
            raise TermSyntaxError(f"unexpected {t[1]!r}", self.line, t[2])
        nxt = self.peek()
        if t[1] in PRIMS and nxt is not None and nxt[1] == "[":
            self.take("[")
            args = [self.take()[1]]
            while self.peek() is not None and self.peek()[1] == ",":
                self.take(",")
                args.append(self.take()[1])
            self.take("]")
            return Prim(t[1], tuple(args))
        return Gen(t[1])


def parse_term(text: str, line: int = 1, col: int = 1) -> Term:
    p = _Parser(text, line, col)
    if p.peek() is None:
        raise TermSyntaxError("empty term", line, col)
    t = p.term()
    if p.peek() is not None:
        tok = p.peek()
        raise TermSyntaxError(f"trailing input {tok[1]!r}", line, tok[2])
    return t


def format_term(t: Term) -> str:
    if isinstance(t, Prim):
        return f"{t.op}[{','.join(t.args)}]"
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, Par):
        return " * ".join(_wrap(p, Seq) for p in t.parts)
    return " ; ".join(_wrap(p, Seq) for p in t.parts)


def _wrap(t: Term, cls) -> str:
    s = format_term(t)
    return f"({s})" if isinstance(t, (Seq, Par)) else s
