"""Graphviz DOT output for diagrams.

Solid edges carry entities, dashed edges carry data.  A data wire with several
sources or targets gets a small point node where its legs meet.  Output is
a pure function of the diagram, so it can be diffed against stored files.
"""
from __future__ import annotations

from .diagram import BOUNDARY, GEN, Diagram

_SHAPES = {GEN: "box", "gamma": "ellipse", "phi": "ellipse",
           "mu": "circle", "delta": "circle", "eps": "circle"}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_label(n) -> str:
    if n.kind == GEN:
        return n.label
    sym = {"gamma": "get", "phi": "set"}.get(n.kind, n.kind)
    return f"{sym}[{n.label}]"


def render(d: Diagram, name: str = "diagram") -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;", "  node [fontname=\"Helvetica\"];"]
    if d.dom:
        lines.append("  { rank=source; " + " ".join(f"in{k} [shape=plaintext, label={_quote(t)}];"
                                                  for k, t in enumerate(d.dom)) + " }")
    for i, n in enumerate(d.nodes):
        lines.append(f"  n{i} [shape={_SHAPES.get(n.kind, 'box')}, label={_quote(_node_label(n))}];")
    if d.cod:
        lines.append("  { rank=sink; " + " ".join(f"out{k} [shape=plaintext, label={_quote(t)}];"
                                                  for k, t in enumerate(d.cod)) + " }")

    def end(p, side: str) -> str:
        node, k = p
        return f"{side}{k}" if node == BOUNDARY else f"n{node}"

    for w, wire in enumerate(d.wires):
        style = "dashed" if d.is_data(wire.type) else "solid"
        srcs = sorted(wire.sources)
        tgts = sorted(wire.targets)
        attrs = f"style={style}, label={_quote(wire.type)}"
        if len(srcs) == 1 and len(tgts) == 1:
            lines.append(f"  {end(srcs[0], 'in')} -> {end(tgts[0], 'out')} [{attrs}];")
            continue
        hub = f"w{w}"
        lines.append(f"  {hub} [shape=point, width=0.08];")
        for s in srcs:
            lines.append(f"  {end(s, 'in')} -> {hub} [style={style}, arrowhead=none, label={_quote(wire.type)}];")
        for t in tgts:
            lines.append(f"  {hub} -> {end(t, 'out')} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
