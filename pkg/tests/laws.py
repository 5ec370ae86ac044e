"""Randomised law checks shared by the module tests and the acceptance suite.

Each returns a list of failure descriptions; empty means every instance passed.
"""
from __future__ import annotations

import random

import numpy as np

from attrcat import boolean as B
from attrcat import geom as G


def atoms(n: int) -> B.AtomSet:
    return B.AtomSet(tuple(B.Atom(f"p{i:02d}", ()) for i in range(n)))


def truth_table(q: B.Proposition) -> list[int]:
    """Valuations satisfying q, found by testing each one."""
    s = q.atomset
    return [v for v in range(1 << len(s)) if B.entails(B.Valuation(s, v), q)]


def random_prop(rng: random.Random, s: B.AtomSet) -> B.Proposition:
    return B.Proposition(s, rng.getrandbits(1 << len(s)))


def oracle_apply(post: B.Proposition, bits: int) -> int:
    """Minimal modification, by looking at every model of the post-condition."""
    models = truth_table(post)
    out = bits
    for i in range(len(post.atomset)):
        vals = {v >> i & 1 for v in models}
        if vals == {1}:
            out |= 1 << i
        elif vals == {0}:
            out &= ~(1 << i)
    return out


def boolean_law_failures(instances: int = 10_000, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for k in range(instances):
        s = atoms(rng.randint(0, 10) if k % 10 else rng.randint(0, 3))
        a, b, c = (random_prop(rng, s) for _ in range(3))
        T, F = B.top(s), B.bot(s)
        laws = {
            "commutative": a & b == b & a and a | b == b | a,
            "associative": (a & b) & c == a & (b & c) and (a | b) | c == a | (b | c),
            "distributive": a & (b | c) == (a & b) | (a & c) and a | (b & c) == (a | b) & (a | c),
            "absorption": a & (a | b) == a and a | (a & b) == a,
            "complement": a & ~a == F and a | ~a == T and ~~a == a,
            "de morgan": ~(a & b) == ~a | ~b and ~(a | b) == ~a & ~b,
            "identity": a & T == a and a | F == a,
            "order": B.prop_entails(a & b, a) and B.prop_entails(a, a | b),
        }
        bad += [f"instance {k}: {law}" for law, ok in laws.items() if not ok]
    return bad


def action_failures(instances: int = 10_000, seed: int = 2, oracle_first: int = 400) -> list[str]:
    """Applying an action twice changes nothing more, and only forced atoms
    move.  The first ``oracle_first`` instances are also compared with the
    oracle that enumerates models."""
    rng = random.Random(seed)
    bad = []
    for k in range(instances):
        n = rng.randint(1, 10)
        s = atoms(n)
        if k % 2:
            lits = [(s.atoms[i], rng.random() < 0.5) for i in rng.sample(range(n), rng.randint(0, n))]
            post = B.conjunction(s, lits)
        else:
            lits = None
            post = random_prop(rng, s)
            if post.is_bot():
                continue
        a = B.BoolAction("a", (), B.top(s), post)
        v = B.Valuation(s, rng.getrandbits(n))
        out = B.apply_action(a, v)
        if B.apply_action(a, out) != out:
            bad.append(f"instance {k}: not idempotent")
        fixed = B.forced(post)
        if any((out.bits ^ v.bits) >> i & 1 for i in range(n) if i not in fixed):
            bad.append(f"instance {k}: frame violated")
        if lits is not None and not B.entails(out, post):
            bad.append(f"instance {k}: post not satisfied")
        if k < oracle_first and out.bits != oracle_apply(post, v.bits):
            bad.append(f"instance {k}: differs from oracle")
    return bad


def value_service_failures(v: G.GeomObject, points: int = 1000, seed: int = 0) -> list[str]:
    """Data service laws on a value object, checked pointwise as
    composites of their point maps."""
    delta, eps, mu = G.mk_value_service(v)
    n = v.dim
    rng = np.random.default_rng(seed)

    def par(f, g, k):
        """``f`` on the first k coordinates, ``g`` on the rest."""
        def h(p):
            a, b = f(p[:k]), g(p[k:])
            return None if a is None or b is None else a + b
        return h

    def seq(*fs):
        def h(p):
            for f in fs:
                if p is None:
                    return None
                p = f(p)
            return p
        return h
    ident = lambda p: tuple(p)  # noqa: E731
    swap = lambda p: p[n:] + p[:n]  # noqa: E731
    D, E, M = delta.phi, eps.phi, mu.phi
    pts = v.sample(rng, points)
    assert len(pts) == points
    bad = []
    for i, p in enumerate(pts):
        # mix equal and distinct arguments so the merge is exercised both ways
        q = pts[(i * 7 + 3) % points] if i % 2 else p
        r = pts[(i * 11 + 5) % points] if i % 3 else q
        pq, pqr = p + q, p + q + r
        laws = {
            "special": seq(D, M)(p) == p,
            "frobenius left": seq(par(D, ident, n), par(ident, M, n))(pq) == seq(M, D)(pq),
            "frobenius right": seq(par(ident, D, n), par(M, ident, 2 * n))(pq) == seq(M, D)(pq),
            "commutative": seq(swap, M)(pq) == M(pq),
            "cocommutative": seq(D, swap)(p) == D(p),
            "associative": seq(par(M, ident, 2 * n), M)(pqr) == seq(par(ident, M, n), M)(pqr),
            "coassociative": seq(D, par(D, ident, n))(p) == seq(D, par(ident, D, n))(p),
            "counit": seq(D, par(ident, E, n))(p) == p,
        }
        bad += [f"point {i}: {law}" for law, ok in laws.items() if not ok]
    return bad
