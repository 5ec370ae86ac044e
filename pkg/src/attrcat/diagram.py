"""String diagrams as typed port hypergraphs.

A :class:`Diagram` is a tuple of nodes plus a tuple of wires.  Every wire
has a type (an object name), a set of *source* ports and a set of *target*
ports.  A port is ``(node, k)``; ``node == BOUNDARY`` denotes the diagram's
own input ``k`` (as a source) or output ``k`` (as a target).

Entity wires are always plain: one source, one target.  Data wires may carry
several sources and targets after :func:`normalize_data` has fused the
multiplication/comultiplication/counit nodes of a connected data component
into a single wire.  Such a wire is a *spider*: all of its sources must agree,
and every target receives the common value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import networkx as nx

from .signature import COPY, Signature
from .terms import Gen, Par, Seq, Term, parse_term

BOUNDARY = -1

GEN = "gen"
MU = "mu"
DELTA = "delta"
EPS = "eps"
GAMMA = "gamma"
PHI = "phi"
DATA_KINDS = (MU, DELTA, EPS)

Port = tuple[int, int]


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    kind: str
    label: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]
    # free-form annotation (e.g. plan step bindings); ignored by equality
    meta: tuple = field(default=(), compare=False)

    def __str__(self) -> str:
        return self.label if self.kind == GEN else f"{self.kind}[{self.label}]"


@dataclass(frozen=True)
class Wire:
    type: str
    sources: frozenset[Port]
    targets: frozenset[Port]


class BoundaryType(NamedTuple):
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[Node, ...]
    wires: tuple[Wire, ...]
    dom: tuple[str, ...]
    cod: tuple[str, ...]
    data: frozenset[str] = frozenset()

    @cached_property
    def in_wire(self) -> dict[Port, int]:
        """Wire feeding each node input port / diagram output."""
        return {p: w for w, wire in enumerate(self.wires) for p in wire.targets}

    @cached_property
    def out_wire(self) -> dict[Port, int]:
        """Wire leaving each node output port / diagram input."""
        return {p: w for w, wire in enumerate(self.wires) for p in wire.sources}

    def node_inputs(self, i: int) -> tuple[int, ...]:
        return tuple(self.in_wire[(i, k)] for k in range(len(self.nodes[i].dom)))

    def node_outputs(self, i: int) -> tuple[int, ...]:
        return tuple(self.out_wire[(i, k)] for k in range(len(self.nodes[i].cod)))

    @property
    def input_wires(self) -> tuple[int, ...]:
        return tuple(self.out_wire[(BOUNDARY, k)] for k in range(len(self.dom)))

    @property
    def output_wires(self) -> tuple[int, ...]:
        return tuple(self.in_wire[(BOUNDARY, k)] for k in range(len(self.cod)))

    def is_data(self, ty: str) -> bool:
        return ty in self.data

    def __str__(self) -> str:
        return f"Diagram({' * '.join(self.dom) or 'I'} -> {' * '.join(self.cod) or 'I'}, " \
               f"{len(self.nodes)} nodes, {len(self.wires)} wires)"


# --- construction ---------------------------------------------------------

def identity(types, data=frozenset()) -> Diagram:
    types = tuple(types)
    wires = tuple(Wire(t, frozenset({(BOUNDARY, k)}), frozenset({(BOUNDARY, k)})) for k, t in enumerate(types))
    return Diagram((), wires, types, types, frozenset(data))


def swap(a: str, b: str, data=frozenset()) -> Diagram:
    wires = (Wire(a, frozenset({(BOUNDARY, 0)}), frozenset({(BOUNDARY, 1)})),
             Wire(b, frozenset({(BOUNDARY, 1)}), frozenset({(BOUNDARY, 0)})))
    return Diagram((), wires, (a, b), (b, a), frozenset(data))


def permutation(types, perm, data=frozenset()) -> Diagram:
    """Wire crossing sending input ``perm[j]`` to output ``j``."""
    types = tuple(types)
    wires = tuple(Wire(types[i], frozenset({(BOUNDARY, i)}), frozenset({(BOUNDARY, j)}))
                  for j, i in enumerate(perm))
    return Diagram((), wires, types, tuple(types[i] for i in perm), frozenset(data))


def single(node: Node, data=frozenset()) -> Diagram:
    wires = [Wire(t, frozenset({(BOUNDARY, k)}), frozenset({(0, k)})) for k, t in enumerate(node.dom)]
    wires += [Wire(t, frozenset({(0, k)}), frozenset({(BOUNDARY, k)})) for k, t in enumerate(node.cod)]
    return Diagram((node,), tuple(wires), node.dom, node.cod, frozenset(data))


def _shift(p: Port, dn: int, db: int) -> Port:
    return (BOUNDARY, p[1] + db) if p[0] == BOUNDARY else (p[0] + dn, p[1])


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    n = len(d1.nodes)
    wires = list(d1.wires)
    for w in d2.wires:
        srcs = frozenset(_shift(p, n, len(d1.dom)) for p in w.sources)
        tgts = frozenset(_shift(p, n, len(d1.cod)) for p in w.targets)
        wires.append(Wire(w.type, srcs, tgts))
    return Diagram(d1.nodes + d2.nodes, tuple(wires), d1.dom + d2.dom, d1.cod + d2.cod, d1.data | d2.data)


class _UF:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _regroup(types: list[str], sources: list[set], targets: list[set], uf: _UF) -> tuple[Wire, ...]:
    groups: dict[int, list[int]] = {}
    for i in range(len(types)):
        groups.setdefault(uf.find(i), []).append(i)
    out = []
    for members in groups.values():
        srcs = frozenset(p for i in members for p in sources[i])
        tgts = frozenset(p for i in members for p in targets[i])
        out.append(Wire(types[members[0]], srcs, tgts))
    return tuple(sorted(out, key=_wire_key))


def _wire_key(w: Wire):
    return (sorted(w.sources), sorted(w.targets))


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Sequential composition ``d1 ; d2``."""
    if d1.cod != d2.dom:
        raise DiagramError(f"type mismatch in ';' composition: {' * '.join(d1.cod) or 'I'} "
                           f"vs. {' * '.join(d2.dom) or 'I'}")
    n = len(d1.nodes)
    types, sources, targets = [], [], []
    for w in d1.wires:
        types.append(w.type)
        sources.append(set(w.sources))
        targets.append({p for p in w.targets if p[0] != BOUNDARY})
    off = len(d1.wires)
    for w in d2.wires:
        types.append(w.type)
        sources.append({(p[0] + n, p[1]) for p in w.sources if p[0] != BOUNDARY})
        targets.append({_shift(p, n, 0) for p in w.targets})
    uf = _UF(len(types))
    for k in range(len(d1.cod)):
        uf.union(d1.in_wire[(BOUNDARY, k)], off + d2.out_wire[(BOUNDARY, k)])
    return Diagram(d1.nodes + d2.nodes, _regroup(types, sources, targets, uf), d1.dom, d2.cod, d1.data | d2.data)


def compose_all(ds) -> Diagram:
    ds = list(ds)
    out = ds[0]
    for d in ds[1:]:
        out = compose(out, d)
    return out


def tensor_all(ds, data=frozenset()) -> Diagram:
    out = identity((), data)
    for d in ds:
        out = tensor(out, d)
    return out


# --- elaboration ------------------------------------------------------------

def _data_set(sig: Signature) -> frozenset[str]:
    return frozenset(o.name for o in sig.objects if o.sort == "data")


def gamma_node(sig: Signature, attr: str) -> Diagram:
    """Retrieval map of an attribute; the copy attribute is comultiplication."""
    a = sig.attribute(attr)
    if a is None:
        raise DiagramError(f"unknown attribute {attr!r}")
    data = _data_set(sig)
    if a.name == COPY:
        return single(Node(DELTA, a.value, (a.value,), (a.value, a.value)), data)
    return single(Node(GAMMA, a.name, (a.carrier,), (a.carrier, a.value)), data)


def phi_node(sig: Signature, attr: str) -> Diagram:
    a = sig.attribute(attr)
    if a is None:
        raise DiagramError(f"unknown attribute {attr!r}")
    data = _data_set(sig)
    if a.name == COPY:
        return single(Node(MU, a.value, (a.value, a.value), (a.value,)), data)
    return single(Node(PHI, a.name, (a.carrier, a.value), (a.carrier,)), data)


def chi_diagram(sig: Signature, attr1: str, attr2: str) -> Diagram:
    """Agreement filter on ``M (x) M'``: retrieve both attributes, merge the
    two data values with the multiplication and discard the result."""
    a1, a2 = sig.attribute(attr1), sig.attribute(attr2)
    if a1 is None or a2 is None:
        raise DiagramError(f"unknown attribute in chi[{attr1},{attr2}]")
    if a1.value != a2.value:
        raise DiagramError(f"chi[{attr1},{attr2}]: value-service mismatch {a1.value} vs. {a2.value}")
    data = _data_set(sig)
    m1, m2, d = a1.carrier, a2.carrier, a1.value
    return compose_all([
        tensor(gamma_node(sig, attr1), gamma_node(sig, attr2)),
        permutation((m1, d, m2, d), (0, 2, 1, 3), data),
        tensor(identity((m1, m2), data), single(Node(MU, d, (d, d), (d,)), data)),
        tensor(identity((m1, m2), data), single(Node(EPS, d, (d,), ()), data)),
    ])


def build_diagram(term: Term | str, sig: Signature) -> Diagram:
    """Elaborate a term into a diagram over ``sig``."""
    if isinstance(term, str):
        term = parse_term(term)
    data = _data_set(sig)

    def obj(name: str) -> str:
        if sig.object(name) is None:
            raise DiagramError(f"unknown object {name!r}")
        return name

    def data_obj(name: str) -> str:
        if not sig.is_data(obj(name)):
            raise DiagramError(f"{name!r} is not a data object")
        return name

    def go(t: Term) -> Diagram:
        if isinstance(t, Seq):
            return compose_all(go(p) for p in t.parts)
        if isinstance(t, Par):
            return tensor_all((go(p) for p in t.parts), data)
        if isinstance(t, Gen):
            g = sig.generator(t.name)
            if g is None:
                raise DiagramError(f"unknown generator {t.name!r}")
            return single(Node(GEN, g.name, g.domain, g.codomain), data)
        op, args = t.op, t.args
        arity = {"swap": 2, "chi": 2, "id": None}.get(op, 1)
        if arity is not None and len(args) != arity:
            raise DiagramError(f"{op} expects {arity} argument(s)")
        if op == "id":
            return identity([obj(a) for a in args], data)
        if op == "swap":
            return swap(obj(args[0]), obj(args[1]), data)
        if op == "mu":
            d = data_obj(args[0])
            return single(Node(MU, d, (d, d), (d,)), data)
        if op == "delta":
            d = data_obj(args[0])
            return single(Node(DELTA, d, (d,), (d, d)), data)
        if op == "eps":
            d = data_obj(args[0])
            return single(Node(EPS, d, (d,), ()), data)
        if op == "get":
            return gamma_node(sig, args[0])
        if op == "set":
            return phi_node(sig, args[0])
        return chi_diagram(sig, args[0], args[1])

    return go(term)


def boundary(d: Diagram) -> BoundaryType:
    return BoundaryType(tuple(d.dom), tuple(d.cod))


# --- validation -------------------------------------------------------------

def executable_order(d: Diagram) -> list[int] | None:
    """Order in which nodes can fire, or ``None`` if some node never can.

    A wire is available as soon as any one of its sources is; the remaining
    sources of a spider are only compared against it.  This is the notion of
    acyclicity used throughout: it coincides with ordinary acyclicity for
    plain wires.
    """
    ready = {w for w, wire in enumerate(d.wires) if any(p[0] == BOUNDARY for p in wire.sources)}
    fired: list[int] = []
    pending = list(range(len(d.nodes)))
    progress = True
    while pending and progress:
        progress = False
        rest = []
        for i in pending:
            ins = [d.in_wire.get((i, k)) for k in range(len(d.nodes[i].dom))]
            if all(w is not None and w in ready for w in ins):
                fired.append(i)
                for k in range(len(d.nodes[i].cod)):
                    w = d.out_wire.get((i, k))
                    if w is not None:
                        ready.add(w)
                progress = True
            else:
                rest.append(i)
        pending = rest
    return None if pending else fired


def validate_diagram(d: Diagram, sig: Signature | None = None) -> list[str]:
    findings: list[str] = []
    data = _data_set(sig) if sig is not None else d.data
    src_count: dict[Port, int] = {}
    tgt_count: dict[Port, int] = {}
    for w, wire in enumerate(d.wires):
        for p in wire.sources:
            src_count[p] = src_count.get(p, 0) + 1
        for p in wire.targets:
            tgt_count[p] = tgt_count.get(p, 0) + 1
        for p in wire.sources | wire.targets:
            if p[0] != BOUNDARY and not 0 <= p[0] < len(d.nodes):
                findings.append(f"wire {w}: unknown port {p}")
    expected_src = {(BOUNDARY, k): t for k, t in enumerate(d.dom)}
    expected_tgt = {(BOUNDARY, k): t for k, t in enumerate(d.cod)}
    for i, n in enumerate(d.nodes):
        expected_tgt.update({(i, k): t for k, t in enumerate(n.dom)})
        expected_src.update({(i, k): t for k, t in enumerate(n.cod)})
    for counts, expected in ((src_count, expected_src), (tgt_count, expected_tgt)):
        for p in expected:
            c = counts.get(p, 0)
            if c > 1:
                findings.append(f"port {p} multiply connected")
            elif c == 0:
                findings.append(f"port {p} unconnected")
        for p in counts:
            if p not in expected:
                findings.append(f"port {p} does not exist")
    for w, wire in enumerate(d.wires):
        for p in wire.sources:
            if p in expected_src and expected_src[p] != wire.type:
                findings.append(f"wire {w}: type {wire.type} does not match source port {p} ({expected_src[p]})")
        for p in wire.targets:
            if p in expected_tgt and expected_tgt[p] != wire.type:
                findings.append(f"wire {w}: type {wire.type} does not match target port {p} ({expected_tgt[p]})")
        if wire.type in data:
            if not wire.sources:
                findings.append(f"wire {w}: data wire without a source (data services have no unit)")
        elif len(wire.sources) != 1 or len(wire.targets) != 1:
            findings.append(f"wire {w}: entity wire {wire.type} must have exactly one source and one target")
    for i, n in enumerate(d.nodes):
        if n.kind in DATA_KINDS and any(t not in data for t in n.dom + n.cod):
            findings.append(f"node {i}: data primitive on entity wire ({n})")
        if sig is not None:
            findings.extend(f"node {i}: {msg}" for msg in _node_against_signature(n, sig))
    if sig is not None:
        for t in set(d.dom + d.cod):
            if sig.object(t) is None:
                findings.append(f"undeclared object {t}")
    if not findings and executable_order(d) is None:
        findings.append("diagram contains a cycle")
    return findings


def _node_against_signature(n: Node, sig: Signature) -> list[str]:
    if n.kind == GEN:
        g = sig.generator(n.label)
        if g is None:
            return [f"unknown generator {n.label}"]
        if (g.domain, g.codomain) != (n.dom, n.cod):
            return [f"generator {n.label} has the wrong type"]
    elif n.kind in (GAMMA, PHI):
        a = sig.attribute(n.label)
        if a is None:
            return [f"unknown attribute {n.label}"]
        want = ((a.carrier,), (a.carrier, a.value)) if n.kind == GAMMA else ((a.carrier, a.value), (a.carrier,))
        if (n.dom, n.cod) != want:
            return [f"{n} has the wrong type"]
    return []


# --- data normalisation -----------------------------------------------------

def normalize_data(d: Diagram) -> Diagram:
    """Fuse every connected multiplication/comultiplication/counit component
    into a single spider wire."""
    keep = [i for i, n in enumerate(d.nodes) if n.kind not in DATA_KINDS]
    if len(keep) == len(d.nodes):
        return _canonical_wire_order(d)
    renum = {old: new for new, old in enumerate(keep)}
    uf = _UF(len(d.wires))
    for i, n in enumerate(d.nodes):
        if n.kind in DATA_KINDS:
            ws = [d.in_wire[(i, k)] for k in range(len(n.dom))] + [d.out_wire[(i, k)] for k in range(len(n.cod))]
            for w in ws[1:]:
                uf.union(ws[0], w)

    def remap(p: Port):
        if p[0] == BOUNDARY:
            return p
        return (renum[p[0]], p[1]) if p[0] in renum else None

    types = [w.type for w in d.wires]
    sources = [{q for q in map(remap, w.sources) if q is not None} for w in d.wires]
    targets = [{q for q in map(remap, w.targets) if q is not None} for w in d.wires]
    wires = _regroup(types, sources, targets, uf)
    wires = tuple(w for w in wires if w.sources or w.targets)
    for w in wires:
        if not w.sources:
            raise DiagramError("data component without inputs (data services have no unit)")
    nodes = tuple(d.nodes[i] for i in keep)
    return Diagram(nodes, wires, d.dom, d.cod, d.data)


def _canonical_wire_order(d: Diagram) -> Diagram:
    wires = tuple(sorted(d.wires, key=_wire_key))
    return d if wires == d.wires else Diagram(d.nodes, wires, d.dom, d.cod, d.data)


def spiders(d: Diagram) -> list[tuple[int, int]]:
    """``(inputs, outputs)`` leg counts of each data wire that is not a
    plain one-in/one-out wire."""
    return sorted((len(w.sources), len(w.targets)) for w in d.wires
                  if d.is_data(w.type) and (len(w.sources), len(w.targets)) != (1, 1))


# --- isomorphism --------------------------------------------------------------

def to_graph(d: Diagram) -> nx.DiGraph:
    g = nx.DiGraph()
    for i, n in enumerate(d.nodes):
        g.add_node(("n", i), label=f"{n.kind}:{n.label}")
    for w, wire in enumerate(d.wires):
        g.add_node(("w", w), label=f"wire:{wire.type}")
    for k in range(len(d.dom)):
        g.add_node(("in", k), label=f"in{k}")
    for k in range(len(d.cod)):
        g.add_node(("out", k), label=f"out{k}")
    edges: dict[tuple, list[str]] = {}
    for w, wire in enumerate(d.wires):
        for (i, k) in wire.sources:
            u = ("in", k) if i == BOUNDARY else ("n", i)
            edges.setdefault((u, ("w", w)), []).append(f"o{k}")
        for (i, k) in wire.targets:
            v = ("out", k) if i == BOUNDARY else ("n", i)
            edges.setdefault((("w", w), v), []).append(f"i{k}")
    for (u, v), labels in edges.items():
        g.add_edge(u, v, label=",".join(sorted(labels)))
    return g


def graph_hash(d: Diagram) -> str:
    return nx.weisfeiler_lehman_graph_hash(to_graph(d), node_attr="label", edge_attr="label", iterations=3)


def _signature_counts(d: Diagram):
    return (d.dom, d.cod, sorted(f"{n.kind}:{n.label}" for n in d.nodes),
            sorted((w.type, len(w.sources), len(w.targets)) for w in d.wires))


def iso_check(d1: Diagram, d2: Diagram) -> bool:
    """Port-graph isomorphism preserving node kinds, port order and boundary order."""
    if _signature_counts(d1) != _signature_counts(d2):
        return False
    eq = lambda a, b: a["label"] == b["label"]  # noqa: E731
    return nx.is_isomorphic(to_graph(d1), to_graph(d2), node_match=eq, edge_match=eq)
