"""Rewriting and bounded proof search on normalised diagrams.

Rules are pairs of data-normalised diagrams.  Spider wires already absorb the
laws of data services, so the rule set only has to cover attribute actions
and user axioms, plus the order-theoretic rules used for inequalities.

Matching a rule side into a host diagram maps pattern nodes injectively onto
host nodes.  Pattern wires that touch the pattern boundary may map onto host
wires that have extra legs (the context); interior pattern wires must match
exactly.  The replacement re-attaches the context legs to the other side's
boundary wires.
"""
from __future__ import annotations

import heapq
import itertools
import time
from collections import Counter
from dataclasses import dataclass, field

from .diagram import (BOUNDARY, Diagram, DiagramError, Wire, _UF, _regroup, build_diagram,
                      chi_diagram, executable_order, graph_hash, iso_check, normalize_data)
from .signature import COPY, Signature

L2R, R2L = "l2r", "r2l"
SPLIT = "well-behaved"


class RewriteError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Diagram
    rhs: Diagram
    direction: str = "bidirectional"  # or "leq-only" (lhs <= rhs)
    raw: bool = False  # matched against diagrams before data normalisation

    def side(self, dir: str) -> tuple[Diagram, Diagram]:
        return (self.lhs, self.rhs) if dir == L2R else (self.rhs, self.lhs)


@dataclass(frozen=True)
class Step:
    rule: str
    location: str
    dir: str

    def __str__(self) -> str:
        return f"{self.rule} @ {self.location} {self.dir}"


@dataclass(frozen=True)
class Proof:
    start: Diagram
    end: Diagram
    steps: tuple[Step, ...]
    kind: str = "equal"

    def serialize(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)


@dataclass
class Budget:
    states: int = 100_000
    seconds: float = 10.0
    extra_nodes: int = 4


# --- rule construction ----------------------------------------------------------

def _rule(sig: Signature, name: str, lhs: str, rhs: str, direction="bidirectional") -> RewriteRule:
    return RewriteRule(name, normalize_data(build_diagram(lhs, sig)), normalize_data(build_diagram(rhs, sig)),
                       direction)


def data_rules(sig: Signature, data: str) -> list[RewriteRule]:
    """Data-service laws on raw diagrams.  Normalisation already quotients by
    them, so search never needs them; they exist for explicit single steps."""
    D = data
    specs = [
        ("special", f"delta[{D}] ; mu[{D}]", f"id[{D}]"),
        ("frobenius-left", f"(delta[{D}] * id[{D}]) ; (id[{D}] * mu[{D}])", f"mu[{D}] ; delta[{D}]"),
        ("frobenius-right", f"(id[{D}] * delta[{D}]) ; (mu[{D}] * id[{D}])", f"mu[{D}] ; delta[{D}]"),
        ("assoc", f"(mu[{D}] * id[{D}]) ; mu[{D}]", f"(id[{D}] * mu[{D}]) ; mu[{D}]"),
        ("coassoc", f"delta[{D}] ; (delta[{D}] * id[{D}])", f"delta[{D}] ; (id[{D}] * delta[{D}])"),
        ("comm", f"swap[{D},{D}] ; mu[{D}]", f"mu[{D}]"),
        ("cocomm", f"delta[{D}] ; swap[{D},{D}]", f"delta[{D}]"),
        ("counit", f"delta[{D}] ; (id[{D}] * eps[{D}])", f"id[{D}]"),
    ]
    return [RewriteRule(f"{n}[{D}]", build_diagram(l, sig), build_diagram(r, sig), raw=True) for n, l, r in specs]


def action_rules(sig: Signature, attr: str) -> list[RewriteRule]:
    """Data-service action laws for one attribute, plus the defining
    expansion of its filter."""
    a = sig.attribute(attr)
    M, D, x = a.carrier, a.value, a.name
    get, set_ = f"get[{x}]", f"set[{x}]"
    specs = [
        ("act-semigroup", f"({set_} * id[{D}]) ; {set_}", f"(id[{M}] * mu[{D}]) ; {set_}"),
        ("act-comonoid", f"{get} ; ({get} * id[{D}])", f"{get} ; (id[{M}] * delta[{D}])"),
        ("act-counit", f"{get} ; (id[{M}] * eps[{D}])", f"id[{M}]"),
        ("act-frobenius-12", f"({get} * id[{D}]) ; (id[{M}] * mu[{D}])", f"{set_} ; {get}"),
        ("act-frobenius-23", f"{set_} ; {get}", f"(id[{M}] * delta[{D}]) ; ({set_} * id[{D}])"),
        ("act-frobenius-13", f"({get} * id[{D}]) ; (id[{M}] * mu[{D}])",
         f"(id[{M}] * delta[{D}]) ; ({set_} * id[{D}])"),
        ("act-special", f"{get} ; {set_}", f"id[{M}]"),
        ("phi-def", set_, f"({get} * id[{D}]) ; (id[{M}] * mu[{D}]) ; (id[{M}] * eps[{D}])"),
    ]
    return [_rule(sig, f"{n}[{x}]", l, r) for n, l, r in specs]


def lax_rules(sig: Signature) -> list[RewriteRule]:
    """Lax data-service homomorphism inequalities for every generator between
    single data objects."""
    out = []
    for g in sig.generators:
        if len(g.domain) == len(g.codomain) == 1 and sig.is_data(g.domain[0]) and sig.is_data(g.codomain[0]):
            D, E, f = g.domain[0], g.codomain[0], g.name
            out += [
                _rule(sig, f"lax-copy[{f}]", f"{f} ; delta[{E}]", f"delta[{D}] ; ({f} * {f})", "leq-only"),
                _rule(sig, f"lax-discard[{f}]", f"{f} ; eps[{E}]", f"eps[{D}]", "leq-only"),
                _rule(sig, f"lax-merge[{f}]", f"mu[{D}] ; {f}", f"({f} * {f}) ; mu[{E}]", "leq-only"),
            ]
    return out


def axiom_rules(sig: Signature) -> list[RewriteRule]:
    return [_rule_from_axiom(sig, ax) for ax in sig.axioms]


def _rule_from_axiom(sig, ax) -> RewriteRule:
    return RewriteRule(ax.name, normalize_data(build_diagram(ax.lhs, sig)), normalize_data(build_diagram(ax.rhs, sig)),
                       "bidirectional" if ax.kind == "equal" else "leq-only")


def rule_set(sig: Signature) -> dict[str, RewriteRule]:
    rules: list[RewriteRule] = []
    for o in sig.objects:
        if o.sort == "data":
            rules += data_rules(sig, o.name)
    for a in sig.attributes:
        rules += action_rules(sig, a.name)
    rules += lax_rules(sig)
    rules += axiom_rules(sig)
    return {r.name: r for r in sorted(rules, key=lambda r: r.name)}


# --- derived morphisms ----------------------------------------------------------

def derive_phi(attr: str, sig: Signature) -> Diagram:
    """The filter induced by an attribute: retrieve, merge with the external
    datum, discard."""
    a = sig.attribute(attr)
    if a is None:
        raise RewriteError(f"unknown attribute {attr!r}")
    M, D = a.carrier, a.value
    get = f"get[{attr}]" if a.name != COPY else f"get[copy:{D}]"
    return build_diagram(f"({get} * id[{D}]) ; (id[{M}] * mu[{D}]) ; (id[{M}] * eps[{D}])", sig)


def build_chi(a1: str, a2: str, sig: Signature) -> Diagram:
    try:
        return chi_diagram(sig, a1, a2)
    except DiagramError as e:
        raise RewriteError(str(e)) from None


def chi_variant(a1: str, a2: str, sig: Signature, first: str) -> Diagram:
    """The two one-sided readings of the agreement filter.

    ``first="left"`` retrieves the first attribute and filters the second
    entity with it; ``first="right"`` does the mirror image.
    """
    x, y = sig.attribute(a1), sig.attribute(a2)
    if x is None or y is None or x.value != y.value:
        raise RewriteError(f"bad attribute pair {a1}, {a2}")
    M, N, D = x.carrier, y.carrier, x.value
    if first == "left":
        t = f"(get[{a1}] * id[{N}]) ; (id[{M}] * swap[{D},{N}]) ; (id[{M}] * set[{a2}])"
    else:
        t = f"(id[{M}] * get[{a2}]) ; (id[{M}] * swap[{N},{D}]) ; (set[{a1}] * id[{N}])"
    return build_diagram(t, sig)


# --- matching -------------------------------------------------------------------

@dataclass(frozen=True)
class Match:
    nodes: tuple[int, ...]  # host node for each pattern node
    wires: tuple[int, ...]  # host wire for each pattern wire

    def describe(self) -> str:
        return ",".join(f"n{i}" for i in self.nodes) or ",".join(f"w{w}" for w in self.wires)


def _node_legs(p: Diagram, pw: int, nodes) -> tuple[set, set]:
    wire = p.wires[pw]
    srcs = {(nodes[i], k) for (i, k) in wire.sources if i != BOUNDARY}
    tgts = {(nodes[i], k) for (i, k) in wire.targets if i != BOUNDARY}
    return srcs, tgts


def _is_interior(w: Wire) -> bool:
    return all(p[0] != BOUNDARY for p in w.sources | w.targets)


def find_matches(host: Diagram, pattern: Diagram) -> list[Match]:
    """All matches of ``pattern`` in ``host``, in a deterministic order."""
    order = _pattern_order(pattern)
    results: list[Match] = []
    pn = len(pattern.nodes)
    assign: list[int | None] = [None] * pn
    wmap: dict[int, int] = {}

    def wires_of(i_p: int, i_h: int):
        pairs = [(pattern.in_wire[(i_p, k)], host.in_wire[(i_h, k)]) for k in range(len(pattern.nodes[i_p].dom))]
        pairs += [(pattern.out_wire[(i_p, k)], host.out_wire[(i_h, k)]) for k in range(len(pattern.nodes[i_p].cod))]
        return pairs

    def extend(depth: int):
        if depth == len(order):
            _finish_wires(host, pattern, tuple(assign), dict(wmap), results)
            return
        i_p = order[depth]
        node = pattern.nodes[i_p]
        used = set(a for a in assign if a is not None)
        for i_h, hn in enumerate(host.nodes):
            if i_h in used or hn != node:
                continue
            added = []
            ok = True
            for pw, hw in wires_of(i_p, i_h):
                if pw in wmap:
                    if wmap[pw] != hw:
                        ok = False
                        break
                else:
                    wmap[pw] = hw
                    added.append(pw)
            if ok:
                assign[i_p] = i_h
                extend(depth + 1)
                assign[i_p] = None
            for pw in added:
                del wmap[pw]

    extend(0)
    return results


def _pattern_order(p: Diagram) -> list[int]:
    if not p.nodes:
        return []
    seen, order = set(), []
    for start in range(len(p.nodes)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            i = queue.pop(0)
            order.append(i)
            for w in p.node_inputs(i) + p.node_outputs(i):
                wire = p.wires[w]
                for (j, _) in sorted(wire.sources | wire.targets):
                    if j != BOUNDARY and j not in seen:
                        seen.add(j)
                        queue.append(j)
    return order


def _finish_wires(host: Diagram, pattern: Diagram, nodes, wmap, results):
    free = [pw for pw in range(len(pattern.wires)) if pw not in wmap]
    choices = []
    for pw in free:
        ty = pattern.wires[pw].type
        choices.append([hw for hw, w in enumerate(host.wires) if w.type == ty])
    for combo in itertools.product(*choices):
        full = dict(wmap)
        full.update(zip(free, combo))
        if _check_wires(host, pattern, nodes, full):
            results.append(Match(nodes, tuple(full[pw] for pw in range(len(pattern.wires)))))


def _check_wires(host: Diagram, pattern: Diagram, nodes, wmap) -> bool:
    by_host: dict[int, list[int]] = {}
    for pw, hw in wmap.items():
        by_host.setdefault(hw, []).append(pw)
    for hw, pws in by_host.items():
        hwire = host.wires[hw]
        is_data = host.is_data(hwire.type)
        if len(pws) > 1 and (not is_data or any(_is_interior(pattern.wires[pw]) for pw in pws)):
            return False
        img_s, img_t = set(), set()
        for pw in pws:
            s, t = _node_legs(pattern, pw, nodes)
            if not s <= hwire.sources or not t <= hwire.targets or img_s & s or img_t & t:
                return False
            img_s |= s
            img_t |= t
        ctx_s = hwire.sources - img_s
        ctx_t = hwire.targets - img_t
        pwire = pattern.wires[pws[0]]
        if len(pws) == 1 and _is_interior(pwire) and (ctx_s or ctx_t):
            return False
        has_input = any(p[0] == BOUNDARY for pw in pws for p in pattern.wires[pw].sources)
        has_output = any(p[0] == BOUNDARY for pw in pws for p in pattern.wires[pw].targets)
        if has_input and not ctx_s:
            return False
        if not is_data:
            # entity wires stay linear: context legs sit exactly where the pattern boundary is
            if has_input != bool(ctx_s) or has_output != bool(ctx_t):
                return False
    # no convexity test: a replacement is kept iff the result can still run,
    # which is what soundness needs once spider wires are read lazily
    return True


def replace(host: Diagram, lhs: Diagram, rhs: Diagram, m: Match) -> list[Diagram]:
    """Replace the image of ``lhs`` under ``m`` by ``rhs``.

    A host wire that both feeds an input and receives an output of the image
    can be cut in two ways: keep everything on one wire, or (when the pattern
    itself joins that input to that output) hand the context sources to the
    input side and the context targets to the output side.  Each choice gives
    one result; invalid results are dropped.
    """
    image = set(m.nodes)
    keep = [i for i in range(len(host.nodes)) if i not in image]
    renum = {old: new for new, old in enumerate(keep)}
    off = len(keep)

    def hport(p):
        return p if p[0] == BOUNDARY else (renum[p[0]], p[1])

    touched: dict[int, list[int]] = {}
    for pw, hw in enumerate(m.wires):
        touched.setdefault(hw, []).append(pw)
    info = {}
    for hw, pws in touched.items():
        hwire = host.wires[hw]
        img_s, img_t, in_pos, out_pos = set(), set(), [], []
        for pw in pws:
            s, t = _node_legs(lhs, pw, m.nodes)
            img_s |= s
            img_t |= t
            in_pos += [k for (i, k) in lhs.wires[pw].sources if i == BOUNDARY]
            out_pos += [k for (i, k) in lhs.wires[pw].targets if i == BOUNDARY]
        ctx_s = {hport(p) for p in hwire.sources - img_s}
        ctx_t = {hport(p) for p in hwire.targets - img_t}
        both = bool(in_pos) and bool(out_pos)
        joined = both and len({lhs.out_wire[(BOUNDARY, k)] for k in in_pos}
                              | {lhs.in_wire[(BOUNDARY, k)] for k in out_pos}) == 1
        info[hw] = (ctx_s, ctx_t, in_pos, out_pos, (False, True) if joined else (False,))
    splittable = [hw for hw in sorted(info) if len(info[hw][4]) == 2]
    results = []
    for choice in itertools.product((False, True), repeat=len(splittable)):
        split = dict(zip(splittable, choice))
        types, sources, targets = [], [], []

        def item(ty, s, t) -> int:
            types.append(ty)
            sources.append(set(s))
            targets.append(set(t))
            return len(types) - 1

        rhs_item = [item(w.type, {(i + off, k) for (i, k) in w.sources if i != BOUNDARY},
                         {(i + off, k) for (i, k) in w.targets if i != BOUNDARY}) for w in rhs.wires]
        links: list[tuple[int, int]] = []
        for hw, hwire in enumerate(host.wires):
            if hw not in info:
                item(hwire.type, {hport(p) for p in hwire.sources}, {hport(p) for p in hwire.targets})
                continue
            ctx_s, ctx_t, in_pos, out_pos, _ = info[hw]
            if split.get(hw, False):
                a, b = item(hwire.type, ctx_s, ()), item(hwire.type, (), ctx_t)
            else:
                a = b = item(hwire.type, ctx_s, ctx_t)
            links += [(a, rhs_item[rhs.out_wire[(BOUNDARY, k)]]) for k in in_pos]
            links += [(b, rhs_item[rhs.in_wire[(BOUNDARY, k)]]) for k in out_pos]
        uf = _UF(len(types))
        for x, y in links:
            uf.union(x, y)
        wires = tuple(w for w in _regroup(types, sources, targets, uf) if w.sources or w.targets)
        nodes = tuple(host.nodes[i] for i in keep) + rhs.nodes
        out = Diagram(nodes, wires, host.dom, host.cod, host.data | rhs.data)
        if _valid(out):
            results.append(out)
    return results


def _rewrites(d: Diagram, lhs: Diagram, rhs: Diagram):
    """All (location, result) pairs for one rule side, numbered in order."""
    k = 0
    for m in find_matches(d, lhs):
        for res in replace(d, lhs, rhs, m):
            yield f"m{k}:{m.describe()}", res
            k += 1


def _valid(d: Diagram) -> bool:
    for w in d.wires:
        if d.is_data(w.type):
            if not w.sources:
                return False
        elif len(w.sources) != 1 or len(w.targets) != 1:
            return False
    return executable_order(d) is not None


# --- order rule: splitting a spider -------------------------------------------------

def _splits(d: Diagram) -> list[tuple[int, frozenset, frozenset]]:
    """Ways to cut a data wire into two wires that each keep a source.  Each
    entry is (wire, sources of the first part, targets of the first part); the
    first part always holds the wire's smallest source."""
    out = []
    for w, wire in enumerate(d.wires):
        if not d.is_data(wire.type) or len(wire.sources) < 2:
            continue
        srcs, tgts = sorted(wire.sources), sorted(wire.targets)
        legs = [("s", p) for p in srcs[1:]] + [("t", p) for p in tgts]
        for mask in range(2 ** len(legs)):
            part = [leg for j, leg in enumerate(legs) if mask >> j & 1]
            s1 = frozenset([srcs[0]] + [p for k, p in part if k == "s"])
            t1 = frozenset(p for k, p in part if k == "t")
            if s1 != wire.sources:
                out.append((w, s1, t1))
    return out


def _apply_split(d: Diagram, w: int, s1: frozenset, t1: frozenset) -> Diagram:
    wire = d.wires[w]
    a = Wire(wire.type, s1, t1)
    b = Wire(wire.type, wire.sources - s1, wire.targets - t1)
    wires = tuple(sorted([x for i, x in enumerate(d.wires) if i != w] + [a, b],
                         key=lambda x: (sorted(x.sources), sorted(x.targets))))
    return Diagram(d.nodes, wires, d.dom, d.cod, d.data)


def _merges(d: Diagram) -> list[tuple[int, int]]:
    return [(a, b) for a, b in itertools.combinations(range(len(d.wires)), 2)
            if d.wires[a].type == d.wires[b].type and d.is_data(d.wires[a].type)]


def _apply_merge(d: Diagram, a: int, b: int) -> Diagram | None:
    wa, wb = d.wires[a], d.wires[b]
    merged = Wire(wa.type, wa.sources | wb.sources, wa.targets | wb.targets)
    wires = tuple(sorted([x for i, x in enumerate(d.wires) if i not in (a, b)] + [merged],
                         key=lambda x: (sorted(x.sources), sorted(x.targets))))
    out = Diagram(d.nodes, wires, d.dom, d.cod, d.data)
    return out if _valid(out) else None


# --- single steps ------------------------------------------------------------------

def successors(d: Diagram, rules: dict[str, RewriteRule], moves) -> list[tuple[Step, Diagram]]:
    """Every diagram reachable in one step.  ``moves`` is a list of
    ``(rule name, direction)``; the rule name ``well-behaved`` denotes spider
    splitting (l2r) or merging (r2l)."""
    out = []
    for name, dir in moves:
        if name == SPLIT:
            options = _split_options(d) if dir == L2R else _merge_options(d)
            for idx, (desc, res) in enumerate(options):
                if res is not None:
                    out.append((Step(name, f"m{idx}:{desc}", dir), res))
            continue
        lhs, rhs = rules[name].side(dir)
        raw = rules[name].raw
        for loc, res in _rewrites(d, lhs, rhs):
            out.append((Step(name, loc, dir), res if raw else normalize_data(res)))
    return out


def _split_options(d: Diagram):
    return [(f"w{w}", _apply_split(d, w, s1, t1)) for (w, s1, t1) in _splits(d)]


def _merge_options(d: Diagram):
    return [(f"w{a}+w{b}", _apply_merge(d, a, b)) for (a, b) in _merges(d)]


def apply_axiom(d: Diagram, rule: str, at: str | int, dir: str, sig: Signature,
                rules: dict[str, RewriteRule] | None = None) -> Diagram:
    """Apply one rule at a match location (``m<k>...`` or the index ``k``)."""
    rules = rule_set(sig) if rules is None else rules
    if rule != SPLIT and rule not in rules:
        raise RewriteError(f"unknown rule {rule!r}")
    if dir not in (L2R, R2L):
        raise RewriteError(f"bad direction {dir!r}")
    if rule != SPLIT and dir == R2L and rules[rule].direction == "leq-only":
        raise RewriteError(f"direction violation: {rule} is an inequality and only applies l2r")
    idx = at if isinstance(at, int) else int(str(at).lstrip("m").split(":", 1)[0])
    raw = rule != SPLIT and rules[rule].raw
    if not raw:
        d = normalize_data(d)
    if rule == SPLIT:
        options = _split_options(d) if dir == L2R else _merge_options(d)
        if not 0 <= idx < len(options) or options[idx][1] is None:
            raise RewriteError(f"no match for {rule} at {at}")
        return options[idx][1]
    lhs, rhs = rules[rule].side(dir)
    res = next(itertools.islice((r for _, r in _rewrites(d, lhs, rhs)), idx, None), None) if idx >= 0 else None
    if res is None:
        raise RewriteError(f"no match for {rule} at {at}")
    return res if raw else normalize_data(res)


def replay(proof: Proof, sig: Signature, rules=None) -> Diagram:
    rules = rule_set(sig) if rules is None else rules
    d = proof.start
    for s in proof.steps:
        d = apply_axiom(d, s.rule, s.location, s.dir, sig, rules)
    return d


def parse_proof(text: str) -> list[Step]:
    steps = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rule, _, rest = line.partition(" @ ")
        loc, dir = rest.rsplit(" ", 1)
        steps.append(Step(rule.strip(), loc.strip(), dir))
    return steps


# --- search -------------------------------------------------------------------------

def _profile(d: Diagram):
    return (Counter(f"{n.kind}:{n.label}" for n in d.nodes),
            Counter((w.type, len(w.sources), len(w.targets)) for w in d.wires if d.is_data(w.type)))


def _distance(a, b) -> int:
    (na, sa), (nb, sb) = a, b
    nodes = sum(((na - nb) + (nb - na)).values())
    spid = sum(((sa - sb) + (sb - sa)).values())
    return abs(sum(na.values()) - sum(nb.values())) + nodes + spid


@dataclass(order=True)
class _Entry:
    priority: tuple
    state: int = field(compare=False)


class _Side:
    def __init__(self, root: Diagram, moves, target_profile):
        self.states: list[tuple[Diagram, int | None, Step | None]] = [(root, None, None)]
        self.index: dict[str, list[int]] = {graph_hash(root): [0]}
        self.moves = moves
        self.target = target_profile
        self.heap = [_Entry((_distance(_profile(root), target_profile), 0, 0), 0)]
        self.counter = 1

    def lookup(self, d: Diagram, h: str) -> int | None:
        for s in self.index.get(h, []):
            if iso_check(self.states[s][0], d):
                return s
        return None

    def chain(self, s: int) -> list[tuple[Diagram, Step | None]]:
        out = []
        while s is not None:
            d, parent, step = self.states[s]
            out.append((d, step))
            s = parent
        return out[::-1]


def _search(d1: Diagram, d2: Diagram, sig: Signature, budget: Budget, fwd_moves, bwd_moves, kind: str):
    rules = rule_set(sig)
    start, goal = normalize_data(d1), normalize_data(d2)
    if (start.dom, start.cod) != (goal.dom, goal.cod):
        raise RewriteError(f"boundary mismatch: {start.dom}->{start.cod} vs. {goal.dom}->{goal.cod}")
    if iso_check(start, goal):
        return Proof(start, start, (), kind)
    limit = max(len(start.nodes), len(goal.nodes)) + budget.extra_nodes
    fwd = _Side(start, fwd_moves, _profile(goal))
    bwd = _Side(goal, bwd_moves, _profile(start))
    deadline = time.monotonic() + budget.seconds
    explored = 2
    while (fwd.heap or bwd.heap) and explored < budget.states and time.monotonic() < deadline:
        side, other = (fwd, bwd) if (fwd.heap and (not bwd.heap or fwd.heap[0] <= bwd.heap[0])) else (bwd, fwd)
        entry = heapq.heappop(side.heap)
        d, _, _ = side.states[entry.state]
        depth = entry.priority[1]
        for step, nd in successors(d, rules, side.moves):
            if len(nd.nodes) > limit:
                continue
            if side is bwd and not _invertible(d, nd, step, rules):
                # the proof is replayed forwards, so backward moves must be undoable
                continue
            h = graph_hash(nd)
            if side.lookup(nd, h) is not None:
                continue
            side.states.append((nd, entry.state, step))
            sid = len(side.states) - 1
            side.index.setdefault(h, []).append(sid)
            explored += 1
            met = other.lookup(nd, h)
            if met is not None:
                f_id, b_id = (sid, met) if side is fwd else (met, sid)
                return _assemble(fwd, bwd, f_id, b_id, sig, rules, kind)
            prio = (_distance(_profile(nd), side.target) + depth + 1, depth + 1, side.counter)
            side.counter += 1
            heapq.heappush(side.heap, _Entry(prio, sid))
    return None


def _invertible(d: Diagram, nd: Diagram, step: Step, rules) -> bool:
    inv = R2L if step.dir == L2R else L2R
    return any(iso_check(x, d) for _, x in successors(nd, rules, [(step.rule, inv)]))


def _assemble(fwd: _Side, bwd: _Side, f_id: int, b_id: int, sig, rules, kind) -> Proof:
    """Turn the two half-paths into one replayable forward proof."""
    plan: list[tuple[str, str, Diagram]] = []
    fchain = fwd.chain(f_id)
    for (d, step) in fchain[1:]:
        plan.append((step.rule, step.dir, d))
    bchain = bwd.chain(b_id)
    # walking the backward chain from the meeting point to the goal inverts each step
    for j in range(len(bchain) - 1, 0, -1):
        step = bchain[j][1]
        plan.append((step.rule, R2L if step.dir == L2R else L2R, bchain[j - 1][0]))
    cur = fchain[0][0]
    steps = []
    for rule, dir, expected in plan:
        for s, nd in successors(cur, rules, [(rule, dir)]):
            if iso_check(nd, expected):
                steps.append(s)
                cur = nd
                break
        else:
            raise RuntimeError(f"proof reconstruction failed at {rule} {dir}")
    return Proof(fchain[0][0], cur, tuple(steps), kind)


def _equality_moves(rules: dict[str, RewriteRule]):
    return [(n, d) for n, r in rules.items() if r.direction == "bidirectional" and not r.raw for d in (L2R, R2L)]


def prove_equal(d1: Diagram, d2: Diagram, sig: Signature, budget: Budget | None = None) -> Proof | None:
    """Bidirectional best-first search for an equational proof; ``None`` means
    the budget ran out (which says nothing about inequality)."""
    budget = budget or Budget()
    moves = _equality_moves(rule_set(sig))
    return _search(d1, d2, sig, budget, moves, moves, "equal")


def prove_leq(d1: Diagram, d2: Diagram, sig: Signature, budget: Budget | None = None) -> Proof | None:
    """Search for a proof of ``d1 <= d2``: equalities both ways, order rules
    left to right (applied right to left when searching back from ``d2``)."""
    budget = budget or Budget()
    rules = rule_set(sig)
    eq = _equality_moves(rules)
    leq = [(n, L2R) for n, r in rules.items() if r.direction == "leq-only"]
    fwd = eq + leq + [(SPLIT, L2R)]
    bwd = eq + [(n, R2L) for n, _ in leq] + [(SPLIT, R2L)]
    return _search(d1, d2, sig, budget, fwd, bwd, "leq")


def check_proof(proof: Proof, sig: Signature) -> bool:
    """Replay and confirm the recorded end; leq proofs must only use order
    rules left to right."""
    rules = rule_set(sig)
    for s in proof.steps:
        leq_rule = s.rule == SPLIT or (s.rule in rules and rules[s.rule].direction == "leq-only")
        if leq_rule and (proof.kind != "leq" or s.dir != L2R):
            return False
    return replay(proof, sig, rules) == proof.end
