"""Geometric semantics: rigid bodies, parameter spaces and timed paths.

An object is a list of simple shapes, a parameter space and a structure map
sending a parameter point to one pose per shape.  A morphism has a duration, a
partial map on parameter points and a path of poses between the two ends.
Value objects have no shapes and are described by their parameter space alone.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.spatial.transform import Rotation, Slerp

TOL = 1e-9


class GeomError(ValueError):
    pass


# --- poses and shapes -------------------------------------------------------------

@dataclass(frozen=True)
class Pose:
    rotation: tuple[float, float, float, float]  # quaternion (x, y, z, w)
    translation: tuple[float, float, float]

    def __post_init__(self):
        q = np.asarray(self.rotation, dtype=float)
        n = float(np.linalg.norm(q))
        if n == 0:
            raise GeomError("zero quaternion")
        if abs(n - 1.0) > TOL:
            object.__setattr__(self, "rotation", tuple(float(x) for x in q / n))

    @classmethod
    def at(cls, x: float, y: float, z: float) -> "Pose":
        return cls((0.0, 0.0, 0.0, 1.0), (float(x), float(y), float(z)))

    def rotation_matrix(self) -> np.ndarray:
        return Rotation.from_quat(self.rotation).as_matrix()

    def matrix(self) -> np.ndarray:
        """Homogeneous 4x4 transform."""
        m = np.eye(4)
        m[:3, :3] = self.rotation_matrix()
        m[:3, 3] = self.translation
        return m

    def close(self, other: "Pose", tol: float = TOL) -> bool:
        q1, q2 = np.asarray(self.rotation), np.asarray(other.rotation)
        same_rot = min(np.max(np.abs(q1 - q2)), np.max(np.abs(q1 + q2))) <= tol
        return bool(same_rot and np.max(np.abs(np.subtract(self.translation, other.translation))) <= tol)


def interpolate(a: Pose, b: Pose, s: float) -> Pose:
    """Straight line in translation, slerp in rotation; ``s`` in [0, 1]."""
    if s <= 0:
        return a
    if s >= 1:
        return b
    t = tuple(float(x) for x in (1 - s) * np.asarray(a.translation) + s * np.asarray(b.translation))
    if np.allclose(a.rotation, b.rotation, atol=0, rtol=0):
        return Pose(a.rotation, t)
    rots = Rotation.from_quat([a.rotation, b.rotation])
    q = Slerp([0.0, 1.0], rots)([s]).as_quat()[0]
    return Pose(tuple(float(x) for x in q), t)


@dataclass(frozen=True)
class Sphere:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeomError(f"sphere radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Box:
    half_extents: tuple[float, float, float]

    def __post_init__(self):
        if len(self.half_extents) != 3 or not all(h > 0 for h in self.half_extents):
            raise GeomError(f"box half-extents must be three positive numbers, got {self.half_extents}")


Shape = Sphere | Box


def disjoint(s1: Shape, p1: Pose, s2: Shape, p2: Pose) -> bool:
    """Exact test that two placed shapes do not touch."""
    if isinstance(s1, Sphere) and isinstance(s2, Sphere):
        d = np.linalg.norm(np.subtract(p1.translation, p2.translation))
        return bool(d > s1.radius + s2.radius)
    if isinstance(s1, Box) and isinstance(s2, Sphere):
        s1, p1, s2, p2 = s2, p2, s1, p1
    if isinstance(s1, Sphere) and isinstance(s2, Box):
        local = p2.rotation_matrix().T @ (np.asarray(p1.translation) - np.asarray(p2.translation))
        h = np.asarray(s2.half_extents)
        closest = np.clip(local, -h, h)
        return bool(np.linalg.norm(local - closest) > s1.radius)
    return _sat_disjoint(s1, p1, s2, p2)


def _sat_disjoint(b1: Box, p1: Pose, b2: Box, p2: Pose) -> bool:
    """Separating-axis test for two oriented boxes."""
    r1, r2 = p1.rotation_matrix(), p2.rotation_matrix()
    h1, h2 = np.asarray(b1.half_extents), np.asarray(b2.half_extents)
    d = np.asarray(p2.translation) - np.asarray(p1.translation)
    axes = [r1[:, i] for i in range(3)] + [r2[:, i] for i in range(3)]
    for i, j in itertools.product(range(3), range(3)):
        c = np.cross(r1[:, i], r2[:, j])
        if np.linalg.norm(c) > 1e-12:
            axes.append(c / np.linalg.norm(c))
    for ax in axes:
        e1 = np.sum(h1 * np.abs(r1.T @ ax))
        e2 = np.sum(h2 * np.abs(r2.T @ ax))
        if abs(d @ ax) > e1 + e2:
            return True
    return False


# --- objects ------------------------------------------------------------------------

@dataclass(frozen=True)
class GeomObject:
    name: str
    simples: tuple[Shape, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    structure: Callable[[tuple], tuple[Pose, ...]] = field(compare=False)
    constraints: tuple[Callable[[tuple], bool], ...] = field(default=(), compare=False)
    finite: tuple[tuple, ...] | None = None  # explicit point set for finite value spaces
    simple_names: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def is_value(self) -> bool:
        return not self.simples

    def in_box(self, p) -> bool:
        if len(p) != self.dim:
            return False
        if self.finite is not None:
            return any(max((abs(a - b) for a, b in zip(p, q)), default=0.0) <= TOL for q in self.finite)
        return all(lo - TOL <= x <= hi + TOL for x, lo, hi in zip(p, self.lo, self.hi))

    def overlaps(self, p) -> list[tuple[int, int]]:
        poses = self.structure(tuple(p))
        return [(i, j) for i, j in itertools.combinations(range(len(self.simples)), 2)
                if not disjoint(self.simples[i], poses[i], self.simples[j], poses[j])]

    def contains(self, p) -> bool:
        p = tuple(float(x) for x in p)
        return self.in_box(p) and all(c(p) for c in self.constraints) and not self.overlaps(p)

    def sample(self, rng: np.random.Generator, n: int, max_tries: int = 100) -> list[tuple]:
        """Up to ``n`` points of the parameter space (rejection sampling)."""
        out = []
        for _ in range(n * max_tries):
            if len(out) == n:
                break
            if self.finite is not None:
                p = self.finite[rng.integers(len(self.finite))]
            else:
                p = tuple(float(x) for x in rng.uniform(self.lo, self.hi))
            if self.contains(p):
                out.append(tuple(p))
        return out

    def label(self, obj: str, i: int) -> str:
        if len(self.simples) == 1:
            return obj
        return f"{obj}:{self.simple_names[i] if i < len(self.simple_names) else i}"


UNIT = GeomObject("I", (), (), (), lambda p: ())


def tensor_objects(x: GeomObject, y: GeomObject) -> GeomObject:
    """Side by side, keeping only the parameter pairs whose bodies do not
    touch (checked by :meth:`GeomObject.contains`)."""
    n = x.dim

    def structure(p):
        return x.structure(p[:n]) + y.structure(p[n:])
    cons = tuple((lambda c: lambda p: c(p[:n]))(c) for c in x.constraints)
    cons += tuple((lambda c: lambda p: c(p[n:]))(c) for c in y.constraints)
    cons += ((lambda p: x.in_box(p[:n]) and y.in_box(p[n:])),)
    finite = None
    if x.finite is not None and y.finite is not None:
        finite = tuple(a + b for a in x.finite for b in y.finite)
    names = tuple(x.label(x.name, i) for i in range(len(x.simples))) + \
        tuple(y.label(y.name, i) for i in range(len(y.simples)))
    lo = x.lo + y.lo
    hi = x.hi + y.hi
    return GeomObject(f"{x.name}*{y.name}", x.simples + y.simples, lo, hi, structure, cons, finite, names)


def tensor_all(objs: Sequence[GeomObject]) -> GeomObject:
    out = UNIT
    for o in objs:
        out = o if out is UNIT else tensor_objects(out, o)
    return out


def same_shape(x: GeomObject, y: GeomObject) -> bool:
    return x.simples == y.simples and x.dim == y.dim


# --- registered object models ---------------------------------------------------------

def _check_disjoint_samples(obj: GeomObject, seed: int = 0, n: int = 64) -> GeomObject:
    rng = np.random.default_rng(seed)
    for _ in range(n):
        p = tuple(float(x) for x in rng.uniform(obj.lo, obj.hi)) if obj.finite is None else \
            obj.finite[rng.integers(len(obj.finite))]
        bad = obj.overlaps(p)
        if bad:
            i, j = bad[0]
            raise GeomError(f"{obj.name}: simples {i} and {j} are not pairwise disjoint at p={p}")
    return obj


def _vec(c, key, default):
    v = c.get(key, default)
    return tuple(float(x) for x in (v if isinstance(v, (tuple, list)) else (v,)))


def _point_robot(c):
    r, z = float(c.get("radius", 0.1)), float(c.get("z", 0.5))
    lo, hi = _vec(c, "lo", (0, 0)), _vec(c, "hi", (10, 10))
    return GeomObject("point-robot-2d", (Sphere(r),), lo, hi, lambda p: (Pose.at(p[0], p[1], z),))


def _carry(c):
    rr, rb = float(c.get("radius", 0.1)), float(c.get("ball_radius", 0.1))
    zr, zb = float(c.get("z", 0.5)), float(c.get("ball_z", 0.25))
    lo, hi = _vec(c, "lo", (0, 0)), _vec(c, "hi", (10, 10))
    return GeomObject("carry-2d", (Sphere(rr), Sphere(rb)), lo, hi,
                      lambda p: (Pose.at(p[0], p[1], zr), Pose.at(p[0], p[1], zb)), (), None, ("robot", "ball"))


def _sphere_pair(c):
    r, s, z = float(c.get("radius", 0.1)), float(c.get("separation", 1.0)), float(c.get("z", 0.5))
    lo, hi = _vec(c, "lo", (0, 0)), _vec(c, "hi", (10, 10))
    return GeomObject("sphere-pair", (Sphere(r), Sphere(r)), lo, hi,
                      lambda p: (Pose.at(p[0] - s / 2, p[1], z), Pose.at(p[0] + s / 2, p[1], z)))


def _free_body(c):
    h = _vec(c, "half_extents", (0.5, 0.5, 0.5))
    lo = _vec(c, "lo", (0, 0, 0)) + (-np.pi,) * 3
    hi = _vec(c, "hi", (10, 10, 10)) + (np.pi,) * 3

    def structure(p):
        q = Rotation.from_euler("xyz", p[3:6]).as_quat()
        return (Pose(tuple(float(x) for x in q), (p[0], p[1], p[2])),)
    return GeomObject("free-body-3d", (Box(h),), lo, hi, structure)


def _value_box(c):
    lo, hi = _vec(c, "lo", (0, 0)), _vec(c, "hi", (10, 10))
    if len(lo) != len(hi):
        raise GeomError("value-box: lo and hi differ in length")
    return GeomObject("value-box", (), lo, hi, lambda p: ())


def _value_finite(c):
    vals = c.get("values", (0.0,))
    pts = tuple(tuple(float(x) for x in (v if isinstance(v, (tuple, list)) else (v,))) for v in vals)
    dim = len(pts[0])
    lo = tuple(min(p[i] for p in pts) for i in range(dim))
    hi = tuple(max(p[i] for p in pts) for i in range(dim))
    return GeomObject("value-finite", (), lo, hi, lambda p: (), (), pts)


OBJECT_MODELS: dict[str, Callable[[Mapping], GeomObject]] = {
    "point-robot-2d": _point_robot,
    "carry-2d": _carry,
    "sphere-pair": _sphere_pair,
    "free-body-3d": _free_body,
    "value-box": _value_box,
    "value-finite": _value_finite,
}


def instantiate_object(model: str, constants: Mapping | None = None, seed: int = 0) -> GeomObject:
    if model not in OBJECT_MODELS:
        raise GeomError(f"unknown model {model!r}")
    return _check_disjoint_samples(OBJECT_MODELS[model](dict(constants or {})), seed)


# --- morphisms ----------------------------------------------------------------------

@dataclass(frozen=True)
class GeomMorphism:
    name: str
    src: GeomObject
    dst: GeomObject
    duration: float
    phi_map: Callable[[tuple], tuple | None] = field(compare=False)
    path_fn: Callable[[tuple, float], tuple[Pose, ...]] | None = field(default=None, compare=False)

    def phi(self, p) -> tuple | None:
        """The parameter map; ``None`` where the morphism is undefined."""
        p = tuple(float(x) for x in p)
        if not self.src.contains(p):
            return None
        q = self.phi_map(p)
        if q is None or not self.dst.contains(q):
            return None
        return tuple(float(x) for x in q)

    def defined(self, p) -> bool:
        return self.phi(p) is not None

    def path(self, p, t: float) -> tuple[Pose, ...] | None:
        q = self.phi(p)
        if q is None:
            return None
        if self.path_fn is not None:
            return self.path_fn(tuple(p), t)
        a, b = self.src.structure(tuple(p)), self.dst.structure(q)
        s = 1.0 if self.duration == 0 else t / self.duration
        return tuple(interpolate(x, y, s) for x, y in zip(a, b))


def identity(x: GeomObject, duration: float = 0.0) -> GeomMorphism:
    return GeomMorphism(f"id[{x.name}]", x, x, float(duration), lambda p: p)


def compose(f: GeomMorphism, g: GeomMorphism) -> GeomMorphism:
    """``f`` then ``g``: durations add, parameter maps compose, paths are
    concatenated."""
    if not same_shape(f.dst, g.src):
        raise GeomError(f"object mismatch: {f.name} ends in {f.dst.name}, {g.name} starts in {g.src.name}")
    tf = f.duration

    def phi_map(p):
        q = f.phi(p)
        return None if q is None else g.phi(q)

    def path_fn(p, t):
        if t <= tf:
            return f.path(p, t)
        return g.path(f.phi(p), t - tf)
    return GeomMorphism(f"{f.name};{g.name}", f.src, g.dst, tf + g.duration, phi_map, path_fn)


def restrict(f: GeomMorphism, where: Callable[[tuple], bool], name: str | None = None) -> GeomMorphism:
    """The same morphism, undefined outside ``where``."""
    return GeomMorphism(name or f"{f.name}|", f.src, f.dst, f.duration,
                        lambda p: f.phi(p) if where(p) else None, f.path_fn)


def mk_value_service(v: GeomObject) -> tuple[GeomMorphism, GeomMorphism, GeomMorphism]:
    """The data service of a value object; every map in it takes no time."""
    if not v.is_value:
        raise GeomError(f"{v.name} is not a value object")
    vv = tensor_objects(v, v)
    n = v.dim
    delta = GeomMorphism(f"delta[{v.name}]", v, vv, 0.0, lambda p: p + p)
    eps = GeomMorphism(f"eps[{v.name}]", v, UNIT, 0.0, lambda p: ())
    mu = GeomMorphism(f"mu[{v.name}]", vv, v, 0.0,
                      lambda p: p[:n] if _close(p[:n], p[n:]) else None)
    return delta, eps, mu


def _close(a, b, tol: float = TOL) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def _times(duration: float, dt: float) -> list[float]:
    n = max(1, int(np.ceil(duration / dt - 1e-12)))
    return [min(duration, k * dt) for k in range(n + 1)] if duration > 0 else [0.0]


def check_morphism(f: GeomMorphism, x: GeomObject | None = None, y: GeomObject | None = None,
                   samples: int = 100, dt: float = 0.01, seed: int = 0) -> list[str]:
    """Sampled check of the endpoint conditions and of disjointness along the
    path.  Returns findings; empty means nothing was violated."""
    x = x or f.src
    y = y or f.dst
    rng = np.random.default_rng(seed)
    findings = []
    for p in x.sample(rng, samples):
        q = f.phi(p)
        if q is None:
            continue
        start, end = f.path(p, 0.0), f.path(p, f.duration)
        if not all(a.close(b) for a, b in zip(start, x.structure(p))):
            findings.append(f"endpoint: path at t=0 differs from the structure map at p={p}")
        if not all(a.close(b) for a, b in zip(end, y.structure(q))):
            findings.append(f"endpoint: path at t={f.duration} differs from the structure map at Phi(p)={q}")
        for t in _times(f.duration, dt):
            poses = f.path(p, t)
            bad = [(i, j) for i, j in itertools.combinations(range(len(x.simples)), 2)
                   if not disjoint(x.simples[i], poses[i], x.simples[j], poses[j])]
            if bad:
                findings.append(f"disjointness: simples {bad[0][0]} and {bad[0][1]} touch at p={p}, t={t:g}")
                break
    return findings


def leq_morphism(f: GeomMorphism, g: GeomMorphism, samples: int = 100, dt: float = 0.1, seed: int = 0) -> bool:
    """Sampled order check: same duration, and wherever ``f`` is defined ``g``
    is defined with the same parameter map and path."""
    if not (same_shape(f.src, g.src) and same_shape(f.dst, g.dst)):
        raise GeomError("boundary mismatch")
    if f.duration != g.duration:
        return False
    rng = np.random.default_rng(seed)
    for p in f.src.sample(rng, samples):
        q = f.phi(p)
        if q is None:
            continue
        q2 = g.phi(p)
        if q2 is None or not _close(q, q2):
            return False
        for t in _times(f.duration, dt):
            if not all(a.close(b) for a, b in zip(f.path(p, t), g.path(p, t))):
                return False
    return True


# --- registered morphism families ------------------------------------------------------

def _move_to(src: GeomObject, dst: GeomObject, c: Mapping) -> Callable:
    """Replace the leading coordinates of the entity by the target value."""
    n = dst.dim
    m = src.dim - n

    def phi(p):
        return p[n:n + m] + p[m:n]
    return phi


def _grasp(src: GeomObject, dst: GeomObject, c: Mapping) -> Callable:
    """Defined only when both inputs stand at the same place; keeps that
    place."""
    n = dst.dim
    tol = float(c.get("tol", TOL))

    def phi(p):
        return p[:n] if _close(p[:n], p[n:2 * n], tol) else None
    return phi


def _release(src: GeomObject, dst: GeomObject, c: Mapping) -> Callable:
    """Both outputs end where the input was."""
    k = dst.dim // src.dim

    def phi(p):
        return tuple(p) * k
    return phi


MORPHISM_FAMILIES: dict[str, Callable] = {
    "move-to": _move_to,
    "grasp": _grasp,
    "release": _release,
}


def instantiate_morphism(family: str, name: str, src: GeomObject, dst: GeomObject,
                         constants: Mapping | None = None) -> GeomMorphism:
    if family not in MORPHISM_FAMILIES:
        raise GeomError(f"unknown morphism family {family!r}")
    c = dict(constants or {})
    if len(src.simples) != len(dst.simples):
        raise GeomError(f"{name}: {family} needs the same bodies at both ends "
                        f"({len(src.simples)} vs. {len(dst.simples)})")
    return GeomMorphism(name, src, dst, float(c.get("duration", 1.0)), MORPHISM_FAMILIES[family](src, dst, c))


# --- bindings and plan evaluation --------------------------------------------------------

@dataclass
class GeomBinding:
    objects: dict[str, GeomObject]
    gens: dict[str, GeomMorphism]
    attrs: dict[str, tuple[int, ...]] = field(default_factory=dict)
    init: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def attribute(self, attr: str, obj_type: str, value_dim: int) -> tuple[int, ...]:
        """Coordinates of an entity's parameters that hold the attribute; by
        default the leading ones."""
        return self.attrs.get(attr, tuple(range(value_dim)))


def _parse_constants(text: str) -> dict:
    out: dict = {}
    text = text.strip()
    if not text:
        return out
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise GeomError(f"expected key=value, got {part.strip()!r}")
        items = val.split()
        try:
            nums = tuple(float(x) for x in items)
        except ValueError:
            raise GeomError(f"constant {key.strip()} must be numeric, got {val.strip()!r}") from None
        out[key.strip()] = nums[0] if len(nums) == 1 else nums
    return out


def parse_binding(text: str, sig) -> GeomBinding:
    """Lines ``bind obj <type> = <model> (<k=v, ...>)``, ``bind gen <name> =
    <family> (<k=v, ...>)`` and ``bind attr <name> = project (<indices>)``;
    ``#`` starts a comment.  Values that are lists are space separated.
    ``init <object> = <numbers>`` lines give a default starting point."""
    import re
    objs, gen_lines, attrs, init = {}, [], {}, {}
    init_pat = re.compile(r"init\s+([A-Za-z_][\w'\-]*)\s*=\s*(.*)$")
    pat = re.compile(r"bind\s+(obj|gen|attr)\s+([A-Za-z_][\w']*)\s*=\s*([A-Za-z][\w\-]*)\s*(?:\((.*)\))?\s*$")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = init_pat.fullmatch(line)
        if m is not None:
            try:
                init[m.group(1)] = tuple(float(x) for x in m.group(2).replace(",", " ").split())
            except ValueError:
                raise GeomError(f"line {lineno}: init values must be numeric") from None
            continue
        m = pat.fullmatch(line)
        if m is None:
            raise GeomError(f"line {lineno}: expected 'bind obj|gen|attr <name> = <model> (<constants>)'")
        kind, name, model, consts = m.groups()
        try:
            if kind == "obj":
                if sig.object(name) is None:
                    raise GeomError(f"unknown object {name!r}")
                objs[name] = instantiate_object(model, _parse_constants(consts or ""))
            elif kind == "gen":
                if sig.generator(name) is None:
                    raise GeomError(f"unknown generator {name!r}")
                gen_lines.append((name, model, _parse_constants(consts or "")))
            else:
                if model != "project":
                    raise GeomError(f"unknown attribute map {model!r}")
                attrs[name] = tuple(int(x) for x in (consts or "").replace(",", " ").split())
        except GeomError as e:
            raise GeomError(f"line {lineno}: {e}") from None
    gens = {}
    for name, family, consts in gen_lines:
        g = sig.generator(name)
        missing = [t for t in g.domain + g.codomain if t not in objs]
        if missing:
            raise GeomError(f"unbound object {missing[0]!r} needed by {name}")
        src = tensor_all([objs[t] for t in g.domain])
        dst = tensor_all([objs[t] for t in g.codomain])
        gens[name] = instantiate_morphism(family, name, src, dst, consts)
    return GeomBinding(objs, gens, attrs, init)


@dataclass
class GeomTrace:
    steps: list[tuple[int, str, tuple[str, ...]]]
    states: list[dict[str, tuple]]
    rows: list[tuple[float, str, Pose]]
    collisions: list[str]
    aborted: str | None = None

    @property
    def final(self) -> dict[str, tuple]:
        return self.states[-1]

    @property
    def duration(self) -> float:
        return self.rows[-1][0] if self.rows else 0.0

    def to_csv(self) -> str:
        lines = ["t,object,qx,qy,qz,qw,x,y,z"]
        for t, obj, pose in self.rows:
            vals = list(pose.rotation) + list(pose.translation)
            lines.append(f"{t:.6f},{obj}," + ",".join(f"{_clean(v):.9f}" for v in vals))
        return "\n".join(lines) + "\n"


def _clean(v: float) -> float:
    return 0.0 if v == 0 else v


def evaluate_plan(d, binding: GeomBinding, init: Mapping[str, Sequence[float]] | Sequence,
                  names: Sequence[str] | None = None, dt: float = 0.01) -> GeomTrace:
    """Run a plan diagram in the geometric model.

    Generators move their bodies along their paths one after another while
    every other body stays put.  Retrieval nodes read attributes off parameter
    points and merged data wires act as equality guards; a failing guard or an
    undefined step ends the trace early with a message.
    """
    from .diagram import BOUNDARY, DELTA, EPS, GAMMA, GEN, MU, PHI, executable_order
    order = executable_order(d)
    if order is None:
        raise GeomError("diagram is not executable")
    names = list(names) if names is not None else [f"x{k}" for k in range(len(d.dom))]
    if isinstance(init, Mapping):
        init = [init[n] for n in names]
    for ty in d.dom:
        if ty not in binding.objects:
            raise GeomError(f"unbound object {ty!r}")
    val: dict[int, tuple] = {}
    owner: dict[int, str] = {}
    origin: dict[int, list[str]] = {}
    live: dict[str, tuple[str, tuple]] = {}  # object -> (type, params)
    trace = GeomTrace([], [], [], [])

    def put(w: int, v: tuple, what: str) -> bool:
        v = tuple(float(x) for x in v)
        if w in val:
            if not _close(val[w], v):
                sources = " = ".join(origin[w] + [what])
                trace.aborted = f"guard failed: {sources}: {_fmt(val[w])} vs. {_fmt(v)}"
                return False
            origin[w].append(what)
            return True
        val[w] = v
        origin[w] = [what]
        return True

    for k, (ty, p) in enumerate(zip(d.dom, init)):
        w = d.out_wire[(BOUNDARY, k)]
        p = tuple(float(x) for x in p)
        if not binding.objects[ty].contains(p):
            raise GeomError(f"initial point {p} of {names[k]} lies outside the parameter space of {ty}")
        put(w, p, names[k])
        if not d.is_data(ty):
            owner[w] = names[k]
            live[names[k]] = (ty, p)
    t0 = 0.0
    trace.states.append({o: p for o, (_, p) in live.items()})
    _sample_still(trace, binding, live, t0)
    step_no = 0
    for i in order:
        n = d.nodes[i]
        ins = [val[w] for w in d.node_inputs(i)]
        outs = d.node_outputs(i)
        if n.kind == GAMMA:
            ty = n.dom[0]
            dim = binding.objects[n.cod[1]].dim
            idx = binding.attribute(n.label, ty, dim)
            obj = owner[d.node_inputs(i)[0]]
            owner[outs[0]] = obj
            put(outs[0], ins[0], obj)
            if not put(outs[1], tuple(ins[0][j] for j in idx), f"{n.label}({obj})"):
                break
        elif n.kind == PHI:
            dim = binding.objects[n.dom[1]].dim
            idx = binding.attribute(n.label, n.dom[0], dim)
            obj = owner[d.node_inputs(i)[0]]
            if not _close(tuple(ins[0][j] for j in idx), ins[1]):
                trace.aborted = f"guard failed: set[{n.label}]({obj}): {_fmt(ins[0])} vs. {_fmt(ins[1])}"
                break
            owner[outs[0]] = obj
            put(outs[0], ins[0], obj)
        elif n.kind == MU:
            if not _close(ins[0], ins[1]):
                trace.aborted = f"guard failed: mu[{n.label}]: {_fmt(ins[0])} vs. {_fmt(ins[1])}"
                break
            put(outs[0], ins[0], f"mu[{n.label}]")
        elif n.kind == DELTA:
            put(outs[0], ins[0], "delta")
            put(outs[1], ins[0], "delta")
        elif n.kind == EPS:
            pass
        elif n.kind == GEN:
            step_no += 1
            meta = dict(n.meta)
            f = binding.gens.get(n.label)
            if f is None:
                raise GeomError(f"unbound generator {n.label!r}")
            in_objs = [owner.get(w) for w in d.node_inputs(i)]
            p = tuple(x for v in ins for x in v)
            q = f.phi(p)
            args = tuple(meta.get("args", ()))
            trace.steps.append((step_no, n.label, args))
            if q is None:
                trace.aborted = f"step {step_no} ({n.label}): undefined at {_fmt(p)}"
                break
            movers = [o for o, ty in zip(in_objs, n.dom) if o is not None and not d.is_data(ty)]
            labels = [binding.objects[live[o][0]].label(o, j) for o in movers
                      for j in range(len(binding.objects[live[o][0]].simples))]
            for o in movers:
                del live[o]
            for t in _times(f.duration, dt)[1:-1]:
                poses = f.path(p, t)
                rows = list(zip(labels, poses))
                _sample(trace, binding, live, t0 + t, rows)
            t0 += f.duration
            out_names = list(meta.get("outputs", [f"{n.label}{i}.{k}" for k in range(len(n.cod))]))
            pos = 0
            for k, ty in enumerate(n.cod):
                dim = binding.objects[ty].dim
                part = q[pos:pos + dim]
                pos += dim
                put(outs[k], part, out_names[k])
                if not d.is_data(ty):
                    owner[outs[k]] = out_names[k]
                    live[out_names[k]] = (ty, part)
            trace.states.append({o: pp for o, (_, pp) in live.items()})
            # the end of a step is recorded under the names of its outputs
            _sample_still(trace, binding, live, t0)
        else:
            raise GeomError(f"cannot evaluate node kind {n.kind}")
    return trace


def _fmt(v) -> str:
    return "(" + ", ".join(f"{x:g}" for x in v) + ")"


def _still_rows(binding, live):
    rows = []
    for o, (ty, p) in live.items():
        obj = binding.objects[ty]
        for j, pose in enumerate(obj.structure(p)):
            rows.append((obj.label(o, j), pose))
    return rows


def _sample_still(trace, binding, live, t):
    _sample(trace, binding, live, t, [])


def _sample(trace: GeomTrace, binding: GeomBinding, live, t: float, moving):
    rows = sorted(list(moving) + _still_rows(binding, live), key=lambda r: r[0])
    shapes = {}
    for o, (ty, _) in live.items():
        obj = binding.objects[ty]
        for j, s in enumerate(obj.simples):
            shapes[obj.label(o, j)] = s
    for label, _ in moving:
        shapes.setdefault(label, None)
    for label, pose in rows:
        trace.rows.append((round(t, 12), label, pose))
    placed = [(lab, pose) for lab, pose in rows if shapes.get(lab) is not None]
    for (la, pa), (lb, pb) in itertools.combinations(placed, 2):
        if not disjoint(shapes[la], pa, shapes[lb], pb):
            trace.collisions.append(f"t={t:g}: {la} touches {lb}")
