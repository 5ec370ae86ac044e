"""Finite partial-function models of diagrams.

Every object is interpreted as a finite set.  The data-service primitives get
their canonical meaning: multiplication filters for equality, comultiplication
duplicates, the counit discards.  A spider wire is defined only when all of its
sources agree.  ``None`` stands for "undefined".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .diagram import BOUNDARY, DELTA, EPS, GAMMA, GEN, MU, PHI, Diagram, executable_order


@dataclass
class FiniteModel:
    carriers: Mapping[str, Sequence]
    gens: Mapping[str, Callable[[tuple], tuple | None]] = field(default_factory=dict)
    # attribute retrieval: m -> (m', d) or None
    gammas: Mapping[str, Callable] = field(default_factory=dict)
    # attribute filters: (m, d) -> m' or None; defaults to the one induced by gamma
    phis: Mapping[str, Callable] = field(default_factory=dict)

    def phi(self, attr: str, m, d):
        if attr in self.phis:
            return self.phis[attr](m, d)
        r = self.gammas[attr](m)
        if r is None or r[1] != d:
            return None
        return r[0]


def evaluate(d: Diagram, model: FiniteModel, inputs: tuple) -> tuple | None:
    order = executable_order(d)
    if order is None:
        raise ValueError("diagram is not executable")
    values: dict[int, object] = {}

    def put(w: int, v) -> bool:
        if w in values:
            return values[w] == v
        values[w] = v
        return True

    for k, v in enumerate(inputs):
        if not put(d.out_wire[(BOUNDARY, k)], v):
            return None
    for i in order:
        n = d.nodes[i]
        args = tuple(values[w] for w in d.node_inputs(i))
        if n.kind == MU:
            out = (args[0],) if args[0] == args[1] else None
        elif n.kind == DELTA:
            out = (args[0], args[0])
        elif n.kind == EPS:
            out = ()
        elif n.kind == GAMMA:
            out = model.gammas[n.label](args[0])
        elif n.kind == PHI:
            r = model.phi(n.label, *args)
            out = None if r is None else (r,)
        elif n.kind == GEN:
            out = model.gens[n.label](args)
        else:
            raise ValueError(f"cannot evaluate node kind {n.kind}")
        if out is None:
            return None
        for k, v in enumerate(out):
            if not put(d.out_wire[(i, k)], v):
                return None
    # late sources of spider wires were all compared in put(); outputs are ready
    return tuple(values[w] for w in d.output_wires)


def denotation(d: Diagram, model: FiniteModel) -> dict[tuple, tuple | None]:
    """The whole partial function, tabulated over all inputs."""
    domains = [model.carriers[t] for t in d.dom]
    return {xs: evaluate(d, model, xs) for xs in itertools.product(*domains)}


def leq_denotation(f: Mapping, g: Mapping) -> bool:
    """Order of partial functions: ``f <= g`` when g extends f."""
    return all(v is None or g[k] == v for k, v in f.items())


def canonical_model(carriers: Mapping[str, Sequence]) -> FiniteModel:
    return FiniteModel(dict(carriers))
