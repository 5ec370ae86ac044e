"""PDDL view of an attribute signature.

Types are the signature's objects, predicates say that two attributes over
the same data object agree, and actions are the generators with their
agreement pre/post conditions.  Plans are validated with the Boolean layer and
can be turned back into diagrams.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import boolean as B
from .diagram import BOUNDARY, GAMMA, GEN, Diagram, Node, _UF, _regroup, validate_diagram
from .signature import COPY, AgreementLiteral, GeneratorDecl, Signature, literal_attribute

REQUIREMENTS = "(:requirements :strips :typing :equality)"


class PddlError(ValueError):
    pass


# --- naming -------------------------------------------------------------------

def action_name(gen: str) -> str:
    return gen.lower().replace("'", "-prime")


def predicate_name(data: str, a1: str, a2: str) -> str:
    return f"agree-{data}-{a1}-{a2}"


def _initials(ty: str) -> str:
    caps = re.findall(r"[A-Z]", ty)
    return ("".join(caps) if caps else ty[:1]).lower()


def param_vars(g: GeneratorDecl) -> tuple[str, ...]:
    """Variable names for a generator's parameters, from the type initials."""
    base = [_initials(t) for t in g.params()]
    out = []
    for i, b in enumerate(base):
        if base.count(b) > 1:
            out.append(f"{b}{base[:i + 1].count(b)}")
        else:
            out.append(b)
    return tuple(out)


@dataclass(frozen=True)
class AgreePred:
    name: str
    data: str
    attr_l: str
    attr_r: str
    types: tuple[str, str]


def agreement_predicates(sig: Signature) -> list[AgreePred]:
    """One predicate per ordered pair of distinct attributes on a data object
    (the implicit copy attribute included)."""
    out = []
    for o in sig.objects:
        if o.sort != "data":
            continue
        attrs = sig.attributes_on(o.name)
        for x in attrs:
            for y in attrs:
                if x.name != y.name:
                    out.append(AgreePred(predicate_name(o.name, x.name, y.name), o.name, x.name, y.name,
                                         (x.carrier, y.carrier)))
    return out


def _pred_index(sig: Signature) -> dict[str, AgreePred]:
    return {p.name: p for p in agreement_predicates(sig)}


def _bool_preds(sig: Signature) -> list[B.Predicate]:
    return [B.Predicate(p.name, p.types) for p in agreement_predicates(sig)]


def _literal_atoms(sig: Signature, g: GeneratorDecl, lit: AgreementLiteral, args: Sequence[str]) -> list[B.Atom]:
    """The literal as atoms over ``args`` (one per parameter), in both orders."""
    x = literal_attribute(sig, g, lit.attr_l, lit.pos_l)
    y = literal_attribute(sig, g, lit.attr_r, lit.pos_r)
    if x is None or y is None or x.value != y.value:
        raise PddlError(f"{g.name}: bad literal {lit}")
    if x.name == y.name:
        raise PddlError(f"{g.name}: literal {lit} compares an attribute with itself")
    a, b = args[lit.pos_l], args[lit.pos_r]
    return [B.Atom(predicate_name(x.value, x.name, y.name), (a, b)),
            B.Atom(predicate_name(x.value, y.name, x.name), (b, a))]


# --- domain ---------------------------------------------------------------------

def _sexpr_atom(a: B.Atom, prefix: str = "") -> str:
    return f"({a.pred} {' '.join(prefix + x for x in a.args)})"


def _lits_text(sig, g, lits, vars_) -> str:
    parts = []
    for lit in lits:
        for a in _literal_atoms(sig, g, lit, vars_):
            s = _sexpr_atom(a, "?")
            parts.append(s if lit.positive else f"(not {s})")
    if not parts:
        return "()"
    return parts[0] if len(parts) == 1 else "(and " + " ".join(parts) + ")"


def emit_domain(sig: Signature, name: str = "attributes") -> str:
    from .signature import validate_signature
    problems = validate_signature(sig)
    if problems:
        raise PddlError("signature invalid: " + "; ".join(problems))
    lines = [f"(define (domain {name})", f"  {REQUIREMENTS}",
             "  (:types " + " ".join(o.name for o in sig.objects) + ")"]
    preds = agreement_predicates(sig)
    lines.append("  (:predicates")
    for p in preds:
        lines.append(f"    ({p.name} ?x - {p.types[0]} ?y - {p.types[1]})")
    lines.append("  )")
    for g in sig.generators:
        vars_ = param_vars(g)
        params = " ".join(f"?{v} - {t}" for v, t in zip(vars_, g.params()))
        lines.append(f"  (:action {action_name(g.name)}")
        lines.append(f"    :parameters ({params})")
        lines.append(f"    :precondition {_lits_text(sig, g, g.pre, vars_)}")
        lines.append(f"    :effect {_lits_text(sig, g, g.post, vars_)}")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


# --- s-expressions ----------------------------------------------------------------

def parse_sexprs(text: str) -> list:
    """Nested lists of lower-case-preserving symbols; ``;`` starts a comment."""
    text = "\n".join(line.split(";", 1)[0] for line in text.splitlines())
    tokens = re.findall(r"\(|\)|[^\s()]+", text)
    stack: list[list] = [[]]
    for t in tokens:
        if t == "(":
            stack.append([])
        elif t == ")":
            if len(stack) == 1:
                raise PddlError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1:
        raise PddlError("unbalanced '('")
    return stack[0]


def _typed_list(items: list) -> list[tuple[str, str]]:
    out, pending = [], []
    i = 0
    while i < len(items):
        if items[i] == "-":
            out += [(v, items[i + 1]) for v in pending]
            pending = []
            i += 2
        else:
            pending.append(items[i])
            i += 1
    return out + [(v, "object") for v in pending]


def _literals_of(expr) -> list[tuple[tuple[str, ...], bool]]:
    if expr == []:
        return []
    if expr[0] == "and":
        return [lit for e in expr[1:] for lit in _literals_of(e)]
    if expr[0] == "not":
        return [(tuple(expr[1]), False)]
    return [(tuple(expr), True)]


def parse_domain(text: str) -> dict:
    """Read back the declarations of an emitted domain."""
    (top,) = parse_sexprs(text)
    out = {"name": top[1][1], "types": [], "predicates": {}, "actions": {}}
    for sec in top[2:]:
        if sec[0] == ":types":
            out["types"] = sec[1:]
        elif sec[0] == ":predicates":
            for p in sec[1:]:
                out["predicates"][p[0]] = tuple(t for _, t in _typed_list(p[1:]))
        elif sec[0] == ":action":
            fields = dict(zip(sec[2::2], sec[3::2]))
            out["actions"][sec[1]] = {
                "parameters": tuple(_typed_list(fields[":parameters"])),
                "precondition": sorted(_literals_of(fields.get(":precondition", []))),
                "effect": sorted(_literals_of(fields.get(":effect", []))),
            }
    return out


def domain_declarations(sig: Signature) -> dict:
    """What :func:`parse_domain` should return for ``emit_domain(sig)``."""
    preds = {p.name: p.types for p in agreement_predicates(sig)}
    actions = {}
    for g in sig.generators:
        vars_ = param_vars(g)

        def lits(ls):
            return sorted(((a.pred,) + tuple("?" + x for x in a.args), lit.positive)
                          for lit in ls for a in _literal_atoms(sig, g, lit, vars_))
        actions[action_name(g.name)] = {
            "parameters": tuple(("?" + v, t) for v, t in zip(vars_, g.params())),
            "precondition": lits(g.pre),
            "effect": lits(g.post),
        }
    return {"types": [o.name for o in sig.objects], "predicates": preds, "actions": actions}


# --- problems -------------------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    name: str
    objects: tuple[tuple[str, str], ...]  # (name, type)
    init: B.Valuation
    goal: B.Proposition
    goal_literals: tuple[tuple[B.Atom, bool], ...] | None = None  # None when not a conjunction
    exclusive: tuple[str, ...] = ()

    @property
    def atomset(self) -> B.AtomSet:
        return self.init.atomset

    def object_type(self, name: str) -> str:
        for o, t in self.objects:
            if o == name:
                return t
        raise PddlError(f"unknown object {name!r}")


def problem_atomset(sig: Signature, objects: Sequence[tuple[str, str]]) -> B.AtomSet:
    return B.atoms_for(_bool_preds(sig), objects)


def _atom_from(expr, s: B.AtomSet, line: int) -> B.Atom:
    if not isinstance(expr, list) or not expr or any(isinstance(x, list) for x in expr):
        raise PddlError(f"line {line}: expected an atom like (pred obj ...)")
    a = B.Atom(expr[0], tuple(expr[1:]))
    if a not in s:
        raise PddlError(f"line {line}: unknown atom {a}")
    return a


def parse_problem(text: str, sig: Signature, name: str = "problem") -> Problem:
    """Problem DSL: ``object <name> : <type>``, ``init (atom)...``,
    ``goal (literal)...`` and ``exclusive <attr>...`` lines; ``#`` comments."""
    objects: list[tuple[str, str]] = []
    init_exprs, goal_exprs, exclusive = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word == "object":
            m = re.fullmatch(r"([A-Za-z_][\w\-']*)\s*:\s*([A-Za-z_][\w']*)", rest.strip())
            if m is None:
                raise PddlError(f"line {lineno}: expected 'object <name> : <type>'")
            if sig.object(m.group(2)) is None:
                raise PddlError(f"line {lineno}: unknown type {m.group(2)!r}")
            if any(o == m.group(1) for o, _ in objects):
                raise PddlError(f"line {lineno}: duplicate object {m.group(1)!r}")
            objects.append((m.group(1), m.group(2)))
        elif word == "init":
            init_exprs += [(e, lineno) for e in parse_sexprs(rest)]
        elif word == "goal":
            goal_exprs += [(e, lineno) for e in parse_sexprs(rest)]
        elif word == "exclusive":
            for a in rest.split():
                if sig.attribute(a) is None or a == COPY:
                    raise PddlError(f"line {lineno}: unknown attribute {a!r}")
                exclusive.append(a)
        elif word == "name":
            name = rest.strip()
        else:
            raise PddlError(f"line {lineno}: unknown declaration {word!r}")
    s = problem_atomset(sig, objects)
    init = B.Valuation.of(s, [_atom_from(e, s, ln) for e, ln in init_exprs])
    init = agreement_closure(sig, init)
    lits = []
    for e, ln in goal_exprs:
        if isinstance(e, list) and e and e[0] == "not":
            lits.append((_atom_from(e[1], s, ln), False))
        else:
            lits.append((_atom_from(e, s, ln), True))
    goal = B.conjunction(s, lits)
    return Problem(name, tuple(objects), init, goal, tuple(lits), tuple(exclusive))


def emit_problem(p: Problem, sig: Signature, domain: str = "attributes") -> str:
    if p.goal.is_bot():
        raise PddlError("unsatisfiable goal is not a literal conjunction")
    lits = p.goal_literals
    if lits is None or B.conjunction(p.atomset, lits) != p.goal:
        raise PddlError("goal is not a literal conjunction")
    lines = [f"(define (problem {p.name})", f"  (:domain {domain})", "  (:objects"]
    lines += [f"    {o} - {t}" for o, t in p.objects]
    lines.append("  )")
    lines.append("  (:init" + "".join(f"\n    {_sexpr_atom(a)}" for a in p.init.true_atoms()) + ")")
    goal = [(_sexpr_atom(a) if pos else f"(not {_sexpr_atom(a)})") for a, pos in lits]
    lines.append("  (:goal (and " + " ".join(goal) + "))")
    lines.append(")")
    return "\n".join(lines) + "\n"


# --- plans ------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanStep:
    action: str  # generator name
    args: tuple[str, ...]  # one object per parameter

    def binding(self, sig: Signature) -> dict[str, str]:
        return dict(zip(param_vars(sig.generator(self.action)), self.args))


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]


def _action_table(sig: Signature) -> dict[str, GeneratorDecl]:
    return {action_name(g.name): g for g in sig.generators}


def parse_plan(text: str, sig: Signature, problem: Problem) -> Plan:
    table = _action_table(sig)
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        exprs = parse_sexprs(line)
        if len(exprs) != 1 or not isinstance(exprs[0], list) or not exprs[0]:
            raise PddlError(f"line {lineno}: expected one '(<action> <obj>...)'")
        head, *args = exprs[0]
        g = table.get(str(head).lower())
        if g is None:
            raise PddlError(f"line {lineno}: unknown action {head!r}")
        params = g.params()
        if len(args) != len(params):
            raise PddlError(f"line {lineno}: arity mismatch for {head}: expected {len(params)} arguments, got {len(args)}")
        for a, t in zip(args, params):
            try:
                ty = problem.object_type(a)
            except PddlError:
                raise PddlError(f"line {lineno}: unknown object {a!r}") from None
            if ty != t:
                raise PddlError(f"line {lineno}: {head}: object {a} has type {ty}, expected {t}")
        steps.append(PlanStep(g.name, tuple(args)))
    return Plan(tuple(steps))


def format_plan(plan: Plan) -> str:
    return "".join(f"({action_name(s.action)} {' '.join(s.args)})\n" for s in plan.steps)


# --- Boolean semantics of plans ----------------------------------------------------

def bool_action(sig: Signature, g: GeneratorDecl) -> B.BoolAction:
    vars_ = param_vars(g)
    local = B.atoms_for(_bool_preds(sig), list(zip(vars_, g.params())))

    def prop(lits):
        return B.conjunction(local, [(a, lit.positive) for lit in lits for a in _literal_atoms(sig, g, lit, vars_)])
    return B.BoolAction(action_name(g.name), tuple(zip(vars_, g.params())), prop(g.pre), prop(g.post))


def _slots(sig: Signature, a: B.Atom) -> tuple[tuple[str, str], tuple[str, str]]:
    p = _pred_index(sig)[a.pred]
    return (a.args[0], p.attr_l), (a.args[1], p.attr_r)


def agreement_closure(sig: Signature, s: B.Valuation) -> B.Valuation:
    """Close the true agreement atoms under symmetry and transitivity: an atom
    holds when its two (object, attribute) slots are linked by true atoms."""
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in s.true_atoms():
        x, y = _slots(sig, a)
        parent[find(x)] = find(y)
    bits = 0
    for i, a in enumerate(s.atomset.atoms):
        x, y = _slots(sig, a)
        if find(x) == find(y):
            bits |= 1 << i
    return B.Valuation(s.atomset, bits)


@dataclass(frozen=True)
class StepReport:
    index: int  # 1-based
    action: str
    binding: tuple[tuple[str, str], ...]
    pre_ok: bool
    post_ok: bool


@dataclass(frozen=True)
class BoolTrace:
    states: tuple[B.Valuation, ...]
    annotations: tuple[StepReport, ...]
    goal_reached: bool
    failed_step: int | None = None  # 1-based
    error: str | None = None
    warnings: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return self.failed_step is None and self.goal_reached


def validate_plan(plan: Plan, problem: Problem, sig: Signature, literal_flip: bool = False) -> BoolTrace:
    """Run the plan from the initial state, one lifted action per step."""
    states = [problem.init]
    notes: list[StepReport] = []
    warnings: list[str] = []
    s = problem.init
    for k, step in enumerate(plan.steps, start=1):
        g = sig.generator(step.action)
        act = bool_action(sig, g)
        j = step.binding(sig)
        local = B.pullback_valuation(j, act.atomset, s, dict(act.params), dict(problem.objects))
        if not B.entails(local, act.pre):
            failing = B.failing_literals(act.pre, local)
            msg = f"step {k} ({action_name(g.name)} {' '.join(step.args)}): precondition fails: {', '.join(failing)}"
            notes.append(StepReport(k, g.name, tuple(j.items()), False, False))
            return BoolTrace(tuple(states), tuple(notes), False, k, msg, tuple(warnings))
        forced = B.forced(act.post)
        if B.conjunction(act.atomset, [(act.atomset.atoms[i], v) for i, v in forced.items()]) != act.post:
            warnings.append(f"step {k}: post-condition is not a literal conjunction")
        s = B.lift_action(act, j, s, literal_flip)
        s = _exclusive_frame(sig, g, step, problem, s, act, forced)
        s = agreement_closure(sig, s)
        post_ok = B.entails(B.pullback_valuation(j, act.atomset, s), act.post)
        if not post_ok:
            warnings.append(f"step {k}: post-condition does not hold afterwards")
        notes.append(StepReport(k, g.name, tuple(j.items()), True, post_ok))
        states.append(s)
    reached = B.entails(s, problem.goal)
    return BoolTrace(tuple(states), tuple(notes), reached, None,
                     None if reached else "final state does not satisfy the goal", tuple(warnings))


def _exclusive_frame(sig, g, step, problem, s, act, forced) -> B.Valuation:
    """An object's exclusive attribute that a step sets loses every other
    agreement it had."""
    if not problem.exclusive:
        return s
    j = step.binding(sig)
    vars_ = param_vars(g)
    outputs = set(g.output_params())
    keep = {B.Atom(a.pred, tuple(j[x] for x in a.args))
            for i, a in enumerate(act.atomset.atoms) if forced.get(i) is True}
    changed = set()
    for lit in g.post:
        if not lit.positive:
            continue
        for attr, pos in ((lit.attr_l, lit.pos_l), (lit.attr_r, lit.pos_r)):
            a = literal_attribute(sig, g, attr, pos)
            if pos in outputs and a.name in problem.exclusive:
                changed.add((j[vars_[pos]], a.name))
    if not changed:
        return s
    bits = s.bits
    for i, a in enumerate(s.atomset.atoms):
        if a in keep:
            continue
        if any(slot in changed for slot in _slots(sig, a)):
            bits &= ~(1 << i)
    return B.Valuation(s.atomset, bits)


# --- plans as diagrams ------------------------------------------------------------

class _Net:
    """Incremental diagram builder over named objects."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.nodes: list[Node] = []
        self.types: list[str] = []
        self.sources: list[set] = []
        self.targets: list[set] = []
        self.links: list[tuple[int, int]] = []
        self.current: dict[str, int] = {}

    def wire(self, ty: str, src=None) -> int:
        self.types.append(ty)
        self.sources.append({src} if src is not None else set())
        self.targets.append(set())
        return len(self.types) - 1

    def node(self, node: Node, ins: Sequence[int]) -> list[int]:
        i = len(self.nodes)
        self.nodes.append(node)
        for k, w in enumerate(ins):
            self.targets[w].add((i, k))
        return [self.wire(ty, (i, k)) for k, ty in enumerate(node.cod)]

    def value(self, obj: str, attr: str) -> int:
        """A data wire carrying ``attr`` of ``obj``; entities pass through a
        retrieval node."""
        w = self.current[obj]
        ty = self.types[w]
        if self.sig.is_data(ty):
            return w
        a = self.sig.attribute(attr, at_type=ty)
        ent, val = self.node(Node(GAMMA, a.name, (ty,), (ty, a.value)), [w])
        self.current[obj] = ent
        return val

    def agree(self, v1: int, v2: int):
        self.links.append((v1, v2))

    def finish(self, inputs: Sequence[str], outputs: Sequence[str], input_wires: dict[str, int]) -> Diagram:
        for k, o in enumerate(outputs):
            self.targets[self.current[o]].add((BOUNDARY, k))
        uf = _UF(len(self.types))
        for a, b in self.links:
            uf.union(a, b)
        wires = _regroup(self.types, self.sources, self.targets, uf)
        data = frozenset(o.name for o in self.sig.objects if o.sort == "data")
        return Diagram(tuple(self.nodes), wires, tuple(self.types[input_wires[o]] for o in inputs),
                       tuple(self.types[self.current[o]] for o in outputs), data)


def _add_step(net: _Net, sig: Signature, g: GeneratorDecl, args: Sequence[str], meta=(),
              pre=None, post=None):
    pre = g.pre if pre is None else pre
    post = g.post if post is None else post
    outputs = g.output_params()
    for lit in pre:
        if lit.positive:
            net.agree(net.value(args[lit.pos_l], lit.attr_l), net.value(args[lit.pos_r], lit.attr_r))
    # a post literal about a consumed input reads that input before the step
    early: dict[tuple[int, str], int] = {}
    for lit in post:
        for attr, pos in ((lit.attr_l, lit.pos_l), (lit.attr_r, lit.pos_r)):
            if ((pos, attr) not in early and pos < len(g.domain) and pos not in outputs
                    and not sig.is_data(g.params()[pos])):
                early[(pos, attr)] = net.value(args[pos], attr)
    ins = [net.current[args[p]] for p in range(len(g.domain))]
    for p in range(len(g.domain)):
        if not sig.is_data(g.domain[p]):
            del net.current[args[p]]
    outs = net.node(Node(GEN, g.name, g.domain, g.codomain, meta), ins)
    for j, w in enumerate(outs):
        net.current[args[outputs[j]]] = w

    def val(pos, attr):
        return early[(pos, attr)] if (pos, attr) in early else net.value(args[pos], attr)
    for lit in post:
        if lit.positive:
            net.agree(val(lit.pos_l, lit.attr_l), val(lit.pos_r, lit.attr_r))


def plan_inputs(plan: Plan, problem: Problem, sig: Signature) -> list[str]:
    created = set()
    used_before = set()
    for st in plan.steps:
        g = sig.generator(st.action)
        for p in range(len(g.domain)):
            if st.args[p] not in created:
                used_before.add(st.args[p])
        for j in g.fresh_outputs():
            o = st.args[g.output_params()[j]]
            if o not in used_before:
                created.add(o)
    return [o for o, _ in problem.objects if o not in created]


def plan_to_diagram(plan: Plan, problem: Problem, sig: Signature, check: bool = True) -> Diagram:
    """One generator node per step, with agreement checks for its pre and post
    conditions; inputs are the objects the plan does not create, outputs the
    objects still alive at the end."""
    if check:
        trace = validate_plan(plan, problem, sig)
        if trace.failed_step is not None:
            raise PddlError(f"validation failure: {trace.error}")
    net = _Net(sig)
    inputs = plan_inputs(plan, problem, sig)
    input_wires = {}
    for k, o in enumerate(inputs):
        input_wires[o] = net.current[o] = net.wire(problem.object_type(o), (BOUNDARY, k))
    for idx, st in enumerate(plan.steps, start=1):
        g = sig.generator(st.action)
        meta = (("step", idx), ("args", st.args),
                ("outputs", tuple(st.args[p] for p in g.output_params())))
        _add_step(net, sig, g, st.args, meta)
    outputs = [o for o, _ in problem.objects if o in net.current]
    d = net.finish(inputs, outputs, input_wires)
    problems = validate_diagram(d, sig)
    if problems:
        raise PddlError("plan diagram invalid: " + "; ".join(problems))
    return d


def condition_diagrams(gen: str, which: str, lit: AgreementLiteral, sig: Signature) -> tuple[Diagram, Diagram]:
    """The bare generator and the generator with the condition's check."""
    g = sig.generator(gen)
    if g is None:
        raise PddlError(f"unknown generator {gen!r}")
    if which not in ("pre", "post"):
        raise PddlError(f"expected 'pre' or 'post', got {which!r}")
    if lit not in (g.pre if which == "pre" else g.post):
        raise PddlError(f"unknown literal {lit} on {gen} {which}")
    args = [f"p{i}" for i in range(len(g.params()))]
    out = []
    for lits in ((), (lit,)):
        net = _Net(sig)
        input_wires = {}
        for k in range(len(g.domain)):
            input_wires[args[k]] = net.current[args[k]] = net.wire(g.domain[k], (BOUNDARY, k))
        _add_step(net, sig, g, args, (), lits if which == "pre" else (), lits if which == "post" else ())
        outs = [args[p] for p in g.output_params()]
        out.append(net.finish(args[:len(g.domain)], outs, input_wires))
    return out[0], out[1]


def verify_condition(gen: str, which: str, lit: AgreementLiteral, sig: Signature, budget=None):
    """Prove that a declared condition follows from the axioms: the generator
    equals the generator guarded by the check.  ``None`` means unknown."""
    from .rewrite import prove_equal
    bare, checked = condition_diagrams(gen, which, lit, sig)
    return prove_equal(checked, bare, sig, budget)
