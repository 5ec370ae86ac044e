"""Finite free Boolean algebras over ground atoms.

A proposition over ``n`` atoms is the set of valuations that satisfy it,
stored as a Python integer with one bit per valuation (``2**n`` bits).
Valuation ``v`` assigns atom ``i`` the truth value ``(v >> i) & 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

MAX_ATOMS = 24


class BooleanError(ValueError):
    pass


class Predicate(NamedTuple):
    name: str
    types: tuple[str, ...]


class Atom(NamedTuple):
    pred: str
    args: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class AtomSet:
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if len(self.atoms) > MAX_ATOMS:
            raise BooleanError(f"atom budget exceeded: {len(self.atoms)} atoms (at most {MAX_ATOMS})")

    def __len__(self) -> int:
        return len(self.atoms)

    def index(self, atom: Atom) -> int:
        try:
            return self._index()[atom]
        except KeyError:
            raise BooleanError(f"unknown atom {atom}") from None

    def _index(self) -> dict[Atom, int]:
        return _index_of(self.atoms)

    def __contains__(self, atom) -> bool:
        return atom in self._index()


@lru_cache(maxsize=256)
def _index_of(atoms: tuple[Atom, ...]) -> dict[Atom, int]:
    return {a: i for i, a in enumerate(atoms)}


def atoms_for(predicates: Iterable[Predicate], objs: Sequence[tuple[str, str]]) -> AtomSet:
    """Every type-respecting ground instance of the predicates, sorted."""
    by_type: dict[str, list[str]] = {}
    for name, ty in objs:
        by_type.setdefault(ty, []).append(name)
    out = []
    for p in predicates:
        for args in itertools.product(*(by_type.get(t, []) for t in p.types)):
            out.append(Atom(p.name, tuple(args)))
    out.sort()
    if len(out) > MAX_ATOMS:
        raise BooleanError(f"atom budget exceeded: {len(out)} atoms (at most {MAX_ATOMS})")
    return AtomSet(tuple(out))


def _repeat(block: int, width: int, total: int) -> int:
    r, w = block, width
    while w < total:
        r |= r << w
        w *= 2
    return r & ((1 << total) - 1)


@lru_cache(maxsize=1024)
def _cylinder(i: int, n: int) -> int:
    half = 1 << i
    return _repeat(((1 << half) - 1) << half, 2 * half, 1 << n)


@dataclass(frozen=True)
class Proposition:
    atomset: AtomSet
    models: int

    def _same(self, other: "Proposition"):
        if other.atomset != self.atomset:
            raise BooleanError("atom set mismatch")

    def __and__(self, other: "Proposition") -> "Proposition":
        self._same(other)
        return Proposition(self.atomset, self.models & other.models)

    def __or__(self, other: "Proposition") -> "Proposition":
        self._same(other)
        return Proposition(self.atomset, self.models | other.models)

    def __invert__(self) -> "Proposition":
        return Proposition(self.atomset, ~self.models & _full(len(self.atomset)))

    def is_bot(self) -> bool:
        return self.models == 0

    def is_top(self) -> bool:
        return self.models == _full(len(self.atomset))

    def count(self) -> int:
        return bin(self.models).count("1")


def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


def top(s: AtomSet) -> Proposition:
    return Proposition(s, _full(len(s)))


def bot(s: AtomSet) -> Proposition:
    return Proposition(s, 0)


def atom(s: AtomSet, a: Atom) -> Proposition:
    return Proposition(s, _cylinder(s.index(a), len(s)))


def p_and(*ps: Proposition) -> Proposition:
    out = ps[0]
    for p in ps[1:]:
        out = out & p
    return out


def p_or(*ps: Proposition) -> Proposition:
    out = ps[0]
    for p in ps[1:]:
        out = out | p
    return out


def p_not(p: Proposition) -> Proposition:
    return ~p


def conjunction(s: AtomSet, literals: Iterable[tuple[Atom, bool]]) -> Proposition:
    out = top(s)
    for a, positive in literals:
        q = atom(s, a)
        out = out & (q if positive else ~q)
    return out


@dataclass(frozen=True)
class Valuation:
    atomset: AtomSet
    bits: int  # bit i is the truth value of atom i

    @classmethod
    def of(cls, s: AtomSet, true_atoms: Iterable[Atom]) -> "Valuation":
        return cls(s, sum(1 << s.index(a) for a in set(true_atoms)))

    def __getitem__(self, a: Atom) -> bool:
        return bool(self.bits >> self.atomset.index(a) & 1)

    def true_atoms(self) -> list[Atom]:
        return [a for i, a in enumerate(self.atomset.atoms) if self.bits >> i & 1]

    def with_value(self, a: Atom, value: bool) -> "Valuation":
        i = self.atomset.index(a)
        return Valuation(self.atomset, self.bits | (1 << i) if value else self.bits & ~(1 << i))


def entails(s: Valuation, q: Proposition) -> bool:
    if s.atomset != q.atomset:
        raise BooleanError("atom set mismatch")
    return bool(q.models >> s.bits & 1)


def prop_entails(p: Proposition, q: Proposition) -> bool:
    p._same(q)
    return p.models & ~q.models == 0


def pullback_valuation(j: Mapping[str, str], local: AtomSet, s: Valuation,
                       var_types: Mapping[str, str] | None = None,
                       obj_types: Mapping[str, str] | None = None) -> Valuation:
    """Read a local valuation off a global one: ``p(x..)`` takes the value of
    ``p(j(x)..)``."""
    _check_binding(j, var_types, obj_types)
    bits = 0
    for i, a in enumerate(local.atoms):
        g = Atom(a.pred, tuple(j[x] for x in a.args))
        if s[g]:
            bits |= 1 << i
    return Valuation(local, bits)


def _check_binding(j, var_types, obj_types):
    if var_types is None or obj_types is None:
        return
    for x, o in j.items():
        if o not in obj_types:
            raise BooleanError(f"unknown object {o!r}")
        if var_types.get(x) != obj_types[o]:
            raise BooleanError(f"type violation: {x} - {var_types.get(x)} bound to {o} - {obj_types[o]}")


@dataclass(frozen=True)
class BoolAction:
    name: str
    params: tuple[tuple[str, str], ...]  # (variable, type)
    pre: Proposition
    post: Proposition

    def __post_init__(self):
        if self.pre.atomset != self.post.atomset:
            raise BooleanError("pre and post over different atom sets")

    @property
    def atomset(self) -> AtomSet:
        return self.pre.atomset


class PreconditionError(BooleanError):
    pass


def forced(q: Proposition) -> dict[int, bool]:
    """Atoms whose value every model of ``q`` agrees on."""
    n = len(q.atomset)
    out = {}
    for i in range(n):
        c = _cylinder(i, n)
        if q.models & ~c == 0:
            out[i] = True
        elif q.models & c == 0:
            out[i] = False
    return out


def apply_action(a: BoolAction, s: Valuation, literal_flip: bool = False) -> Valuation:
    """Minimal modification: atoms forced by the post-condition take their
    forced value, everything else is left alone.

    ``literal_flip`` switches to the bare flip rule: every atom the
    post-condition forces false is negated (whatever its current value) and
    atoms forced true are left untouched.
    """
    if not entails(s, a.pre):
        raise PreconditionError(f"precondition of {a.name} violated")
    bits = s.bits
    for i, v in forced(a.post).items():
        if literal_flip:
            if not v:
                bits ^= 1 << i
        elif v:
            bits |= 1 << i
        else:
            bits &= ~(1 << i)
    return Valuation(s.atomset, bits)


def lift_action(a: BoolAction, j: Mapping[str, str], s: Valuation, literal_flip: bool = False) -> Valuation:
    """Apply an action to a global state through a binding of its parameters."""
    local = pullback_valuation(j, a.atomset, s)
    if not entails(local, a.pre):
        failing = failing_literals(a.pre, local)
        raise PreconditionError(f"invalid application of {a.name}: precondition fails"
                                + (f" ({', '.join(failing)})" if failing else ""))
    new_local = apply_action(a, local, literal_flip)
    out = s
    for i, la in enumerate(a.atomset.atoms):
        if (new_local.bits ^ local.bits) >> i & 1:
            out = out.with_value(Atom(la.pred, tuple(j[x] for x in la.args)), bool(new_local.bits >> i & 1))
    return out


def failing_literals(q: Proposition, s: Valuation) -> list[str]:
    out = []
    for i, v in sorted(forced(q).items()):
        if bool(s.bits >> i & 1) != v:
            a = q.atomset.atoms[i]
            out.append(str(a) if v else f"not {a}")
    return out
