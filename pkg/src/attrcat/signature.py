"""Attribute signatures and the text format they are read from.

A signature is the presentation of a free symmetric monoidal category with
attributes.  It is written in a small line-oriented DSL::

    entity Robot
    data Loc
    attr loc_R : Robot -> Loc
    gen MoveTo : Robot * Loc -> Robot
      post agree(loc_R@0, copy@1)
    axiom nat_MoveTo : MoveTo ; get[loc_R] = ...

Every data object ``D`` carries an implicit ``copy`` attribute whose
retrieval map is the comultiplication of ``D``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import Term, TermSyntaxError, format_term, parse_term

COPY = "copy"


class SignatureError(ValueError):
    """Syntax or reference error in signature source."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        loc = f"{line}:{col}: " if line else ""
        super().__init__(f"{loc}{msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    sort: str  # "entity" | "data"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    carrier: str
    value: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AgreementLiteral:
    positive: bool
    attr_l: str
    pos_l: int
    attr_r: str
    pos_r: int

    def __str__(self) -> str:
        s = f"agree({self.attr_l}@{self.pos_l}, {self.attr_r}@{self.pos_r})"
        return s if self.positive else "!" + s


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    pre: tuple[AgreementLiteral, ...] = ()
    post: tuple[AgreementLiteral, ...] = ()
    line: int = field(default=0, compare=False)

    def params(self) -> tuple[str, ...]:
        """Types of the action parameters: the domain, then every codomain
        object that does not persist from an input of the same type."""
        return self.domain + tuple(self.codomain[j] for j in self.fresh_outputs())

    def output_params(self) -> tuple[int, ...]:
        """Parameter index that each codomain position is identified with."""
        used: set[int] = set()
        fresh = iter(range(len(self.domain), len(self.domain) + len(self.fresh_outputs())))
        out = []
        for ty in self.codomain:
            match = next((i for i, t in enumerate(self.domain) if t == ty and i not in used), None)
            if match is None:
                out.append(next(fresh))
            else:
                used.add(match)
                out.append(match)
        return tuple(out)

    def fresh_outputs(self) -> tuple[int, ...]:
        used: set[int] = set()
        fresh = []
        for j, ty in enumerate(self.codomain):
            match = next((i for i, t in enumerate(self.domain) if t == ty and i not in used), None)
            if match is None:
                fresh.append(j)
            else:
                used.add(match)
        return tuple(fresh)


@dataclass(frozen=True)
class AxiomDecl:
    name: str
    kind: str  # "equal" | "leq"
    lhs: Term
    rhs: Term
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Signature:
    objects: tuple[ObjectDecl, ...] = ()
    attributes: tuple[AttributeDecl, ...] = ()
    generators: tuple[GeneratorDecl, ...] = ()
    axioms: tuple[AxiomDecl, ...] = ()

    def object(self, name: str) -> ObjectDecl | None:
        return next((o for o in self.objects if o.name == name), None)

    def sort(self, name: str) -> str | None:
        o = self.object(name)
        return o.sort if o else None

    def is_data(self, name: str) -> bool:
        return self.sort(name) == "data"

    def generator(self, name: str) -> GeneratorDecl | None:
        return next((g for g in self.generators if g.name == name), None)

    def attribute(self, name: str, at_type: str | None = None) -> AttributeDecl | None:
        """Look up an attribute; ``copy`` (or ``copy:D``) resolves to the
        implicit copy attribute of a data object."""
        if name == COPY or name.startswith(COPY + ":"):
            data = name.split(":", 1)[1] if ":" in name else at_type
            if data is None or not self.is_data(data):
                return None
            return AttributeDecl(COPY, data, data)
        return next((a for a in self.attributes if a.name == name), None)

    def attributes_on(self, data: str) -> list[AttributeDecl]:
        """All attributes valued in ``data``, the implicit copy attribute last."""
        return [a for a in self.attributes if a.value == data] + [AttributeDecl(COPY, data, data)]

    def axiom(self, name: str) -> AxiomDecl | None:
        return next((a for a in self.axioms if a.name == name), None)


_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_LIT = re.compile(rf"\s*(!?)agree\(\s*({_IDENT})\s*@\s*(\d+)\s*,\s*({_IDENT})\s*@\s*(\d+)\s*\)")


def _objlist(text: str, line: int, col: int) -> tuple[str, ...]:
    text = text.strip()
    if text in ("", "I"):
        return ()
    names = tuple(p.strip() for p in text.split("*"))
    for n in names:
        if not re.fullmatch(_IDENT, n):
            raise SignatureError(f"bad object name {n!r}", line, col)
    return names


def _literals(text: str, line: int, col: int) -> list[AgreementLiteral]:
    lits = []
    pos = 0
    while text[pos:].strip():
        m = _LIT.match(text, pos)
        if m is None:
            raise SignatureError(f"bad literal near {text[pos:].strip()[:20]!r}", line, col + pos)
        lits.append(AgreementLiteral(m.group(1) != "!", m.group(2), int(m.group(3)), m.group(4), int(m.group(5))))
        pos = m.end()
    return lits


def parse_signature(text: str) -> Signature:
    """Parse signature DSL source.  Raises :class:`SignatureError` on syntax
    errors, duplicate names and unknown references."""
    objects: list[ObjectDecl] = []
    attrs: list[AttributeDecl] = []
    gens: list[GeneratorDecl] = []
    axioms: list[AxiomDecl] = []
    names: dict[str, int] = {}

    def declare(name: str, line: int):
        if name in names:
            raise SignatureError(f"duplicate name {name!r} (first declared on line {names[name]})", line, 1)
        names[name] = line

    current: dict | None = None

    def flush():
        nonlocal current
        if current is not None:
            gens.append(GeneratorDecl(current["name"], current["dom"], current["cod"],
                                      tuple(current["pre"]), tuple(current["post"]), current["line"]))
            current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        word, _, rest = body.partition(" ")
        if indented and word in ("pre", "post"):
            if current is None:
                raise SignatureError(f"'{word}' block outside a generator", lineno, col)
            current[word].extend(_literals(rest, lineno, col + len(word) + 1))
            continue
        flush()
        if word in ("entity", "data"):
            name = rest.strip()
            if not re.fullmatch(_IDENT, name) or name == COPY:
                raise SignatureError(f"bad {word} name {name!r}", lineno, col)
            declare(name, lineno)
            objects.append(ObjectDecl(name, word, lineno))
        elif word == "attr":
            m = re.fullmatch(rf"({_IDENT})\s*:\s*({_IDENT})\s*->\s*({_IDENT})", rest.strip())
            if m is None:
                raise SignatureError("expected 'attr <name> : <carrier> -> <value>'", lineno, col)
            if m.group(1) == COPY:
                raise SignatureError("'copy' is reserved for the implicit copy attribute", lineno, col)
            declare(m.group(1), lineno)
            attrs.append(AttributeDecl(m.group(1), m.group(2), m.group(3), lineno))
        elif word == "gen":
            m = re.fullmatch(rf"({_IDENT})\s*:(.*)->(.*)", rest.strip())
            if m is None:
                raise SignatureError("expected 'gen <name> : <objs> -> <objs>'", lineno, col)
            declare(m.group(1), lineno)
            current = {"name": m.group(1), "dom": _objlist(m.group(2), lineno, col),
                       "cod": _objlist(m.group(3), lineno, col), "pre": [], "post": [], "line": lineno}
        elif word == "axiom":
            m = re.fullmatch(rf"({_IDENT})\s*:(.*)", rest.strip())
            if m is None:
                raise SignatureError("expected 'axiom <name> : <term> = <term>'", lineno, col)
            declare(m.group(1), lineno)
            eq = m.group(2)
            kind, sep = ("leq", "<=") if "<=" in eq else ("equal", "=")
            if sep not in eq:
                raise SignatureError("axiom needs '=' or '<='", lineno, col)
            lhs_s, rhs_s = eq.split(sep, 1)
            tcol = col + len(body) - len(eq)
            try:
                lhs = parse_term(lhs_s, lineno, tcol)
                rhs = parse_term(rhs_s, lineno, tcol + len(lhs_s) + len(sep))
            except TermSyntaxError as e:
                raise SignatureError(str(e).split(": ", 1)[1], e.line, e.col) from None
            axioms.append(AxiomDecl(m.group(1), kind, lhs, rhs, lineno))
        else:
            raise SignatureError(f"unknown declaration {word!r}", lineno, col)
    flush()

    sig = Signature(tuple(objects), tuple(attrs), tuple(gens), tuple(axioms))
    _check_references(sig)
    return sig


def _check_references(sig: Signature) -> None:
    known = {o.name for o in sig.objects}
    for a in sig.attributes:
        for ref in (a.carrier, a.value):
            if ref not in known:
                raise SignatureError(f"unknown object {ref!r} in attribute {a.name!r}", a.line, 1)
    for g in sig.generators:
        for ref in g.domain + g.codomain:
            if ref not in known:
                raise SignatureError(f"unknown object {ref!r} in generator {g.name!r}", g.line, 1)
        for lit in g.pre + g.post:
            for attr in (lit.attr_l, lit.attr_r):
                if attr != COPY and sig.attribute(attr) is None:
                    raise SignatureError(f"unknown attribute {attr!r} in generator {g.name!r}", g.line, 1)


def format_signature(sig: Signature) -> str:
    """Pretty-print in the DSL; ``parse_signature`` inverts this."""
    out = [f"{o.sort} {o.name}" for o in sig.objects]
    out += [f"attr {a.name} : {a.carrier} -> {a.value}" for a in sig.attributes]
    for g in sig.generators:
        dom = " * ".join(g.domain) or "I"
        cod = " * ".join(g.codomain) or "I"
        out.append(f"gen {g.name} : {dom} -> {cod}")
        if g.pre:
            out.append("  pre " + " ".join(map(str, g.pre)))
        if g.post:
            out.append("  post " + " ".join(map(str, g.post)))
    for ax in sig.axioms:
        op = "=" if ax.kind == "equal" else "<="
        out.append(f"axiom {ax.name} : {format_term(ax.lhs)} {op} {format_term(ax.rhs)}")
    return "\n".join(out) + "\n"


def literal_attribute(sig: Signature, g: GeneratorDecl, attr: str, pos: int) -> AttributeDecl | None:
    params = g.params()
    if not 0 <= pos < len(params):
        return None
    a = sig.attribute(attr, at_type=params[pos])
    if a is None or a.carrier != params[pos]:
        return None
    return a


def validate_signature(sig: Signature) -> list[str]:
    """Return a list of findings; an empty list means the signature is valid."""
    findings: list[str] = []
    for a in sig.attributes:
        if sig.sort(a.value) != "data":
            findings.append(f"attribute {a.name}: attribute value must be data sort")
        if sig.sort(a.carrier) is None:
            findings.append(f"attribute {a.name}: unknown carrier {a.carrier}")
    for g in sig.generators:
        for which, lits, limit in (("pre", g.pre, len(g.domain)), ("post", g.post, len(g.params()))):
            for lit in lits:
                al = literal_attribute(sig, g, lit.attr_l, lit.pos_l)
                ar = literal_attribute(sig, g, lit.attr_r, lit.pos_r)
                if lit.pos_l >= limit or lit.pos_r >= limit or al is None or ar is None:
                    findings.append(f"generator {g.name}: {which} literal {lit} does not match its ports")
                elif al.value != ar.value:
                    findings.append(f"generator {g.name}: {which} literal {lit} mixes data services "
                                    f"{al.value} and {ar.value}")
    from .diagram import DiagramError, boundary, build_diagram

    for ax in sig.axioms:
        try:
            lhs = boundary(build_diagram(ax.lhs, sig))
            rhs = boundary(build_diagram(ax.rhs, sig))
        except DiagramError as e:
            findings.append(f"axiom {ax.name}: {e}")
            continue
        if lhs != rhs:
            findings.append(f"axiom {ax.name}: axiom boundary mismatch {lhs} vs {rhs}")
    return findings
