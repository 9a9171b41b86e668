"""JSON model files.

A file looks like::

    {
      "schema": "hkgood/1",
      "theta": "golden",
      "subject": "wedge3",
      "models": {
        "wedge3": {
          "cohomology": {"0": {"group": {"free": 1}},
                         "2": {"group": {"free": 2}, "action": [[0, -1], [1, -1]]}},
          "ktheory": {"0": {...}, "1": {...}},
          "unit_h": [1], "unit_k": [1, 0, 0],
          "traces": [{"name": "tau", "h0": [1], "k0": [1, 0, 0]}],
          "flags": {"chern_class_iso": true}
        }
      },
      "orbit_breaks": {"name": {"x": "X", "y": "Y", "split_declared": true}},
      "declared": {"name": {"homology": {"0": {...}}, "ktheory": {...}, ...}}
    }

Groups are ``{"free": r, "torsion": [d, ...]}`` or ``{"generators": n,
"relations": [[...], ...]}`` (one list per relation).  A module is a group
with an optional ``action`` matrix (rows indexed by generators), or
``{"coinvariants": G, "invariants": G}`` when only its ends are known.
Integers may be given as decimal strings; rationals as "p/q"; a + bθ as [a, b].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .abelian import PresentedGroup
from .circle import Theta, parse_real
from .elliott import EllInvariant, SimplexDescriptor, TraceFunctional
from .errors import HKError, ModelError
from .intmat import IntMatrix
from .orbit_break import OrbitBreakInput
from .zaction import (FLAG_NAMES, GradedInvariant, PresentedEnds, Resolved, SpaceModel,
                      SpaceTrace, ZModule, z2_grade)

SCHEMA = "hkgood/1"


def _keys(obj, allowed, path, required=()):
    if not isinstance(obj, dict):
        raise ModelError(f"expected an object, got {type(obj).__name__}", path=path)
    for k in obj:
        if k not in allowed:
            raise ModelError(f"unknown key {k!r}", path=path)
    for k in required:
        if k not in obj:
            raise ModelError(f"missing key {k!r}", path=path)


def parse_int(v, path) -> int:
    if isinstance(v, bool):
        raise ModelError(f"expected an integer, got {v!r}", path=path)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise ModelError(f"expected an integer, got {v!r}", path=path)


def _int_list(v, path) -> list[int]:
    if not isinstance(v, list):
        raise ModelError("expected a list of integers", path=path)
    return [parse_int(x, f"{path}[{i}]") for i, x in enumerate(v)]


def _reals(v, path) -> list:
    if not isinstance(v, list):
        raise ModelError("expected a list of values", path=path)
    out = []
    for i, x in enumerate(v):
        try:
            out.append(parse_real(x))
        except ModelError as e:
            raise ModelError(e.args[0], path=f"{path}[{i}]") from None
    return out


def _real_json(r):
    a, b = r.to_json()
    return a if b == "0" else [a, b]


# --------------------------------------------------------------------------
# groups and modules
# --------------------------------------------------------------------------


def parse_group(obj, path) -> PresentedGroup:
    if isinstance(obj, dict) and ("free" in obj or "torsion" in obj):
        _keys(obj, ("free", "torsion"), path)
        free = parse_int(obj.get("free", 0), f"{path}.free")
        tors = _int_list(obj.get("torsion", []), f"{path}.torsion")
        if free < 0 or any(d < 1 for d in tors):
            raise ModelError("free rank must be >= 0 and torsion orders >= 1", path=path)
        return PresentedGroup.from_invariants(free, tors)
    _keys(obj, ("generators", "relations"), path, required=("generators",))
    n = parse_int(obj["generators"], f"{path}.generators")
    if n < 0:
        raise ModelError("negative number of generators", path=path)
    rels = obj.get("relations", [])
    if not isinstance(rels, list):
        raise ModelError("relations must be a list", path=f"{path}.relations")
    cols = []
    for j, r in enumerate(rels):
        col = _int_list(r, f"{path}.relations[{j}]")
        if len(col) != n:
            raise ModelError(f"relation has {len(col)} entries for {n} generators",
                             path=f"{path}.relations[{j}]")
        cols.append(col)
    return PresentedGroup(n, IntMatrix.from_columns(cols, n))


def group_to_json(g: PresentedGroup) -> dict:
    out = {"generators": g.ngens}
    cols = [list(c) for c in g.relations.columns()]
    if cols:
        out["relations"] = cols
    return out


def parse_module(obj, path):
    if isinstance(obj, dict) and ("coinvariants" in obj or "invariants" in obj):
        _keys(obj, ("coinvariants", "invariants"), path,
              required=("coinvariants", "invariants"))
        return PresentedEnds(parse_group(obj["coinvariants"], f"{path}.coinvariants"),
                             parse_group(obj["invariants"], f"{path}.invariants"))
    _keys(obj, ("group", "action"), path, required=("group",))
    g = parse_group(obj["group"], f"{path}.group")
    if "action" not in obj:
        return ZModule(g)
    rows = obj["action"]
    if not isinstance(rows, list) or len(rows) != g.ngens:
        raise ModelError(f"action must be a {g.ngens}x{g.ngens} matrix", path=f"{path}.action")
    data = [_int_list(r, f"{path}.action[{i}]") for i, r in enumerate(rows)]
    if any(len(r) != g.ngens for r in data):
        raise ModelError(f"action must be a {g.ngens}x{g.ngens} matrix", path=f"{path}.action")
    try:
        return ZModule(g, IntMatrix(data, g.ngens, g.ngens))
    except HKError as e:
        raise ModelError(str(e), path=f"{path}.action") from None


def module_to_json(m) -> dict:
    if isinstance(m, PresentedEnds):
        return {"coinvariants": group_to_json(m.coinvariants),
                "invariants": group_to_json(m.invariants)}
    out = {"group": group_to_json(m.group)}
    if not m.alpha.matrix.is_identity():
        out["action"] = m.alpha.matrix.tolist()
    return out


def _parse_simplex(obj, path) -> SimplexDescriptor:
    _keys(obj, ("points", "unique_trace"), path, required=("points",))
    pts = obj["points"]
    if not isinstance(pts, list) or not pts or not all(isinstance(p, str) for p in pts):
        raise ModelError("points must be a nonempty list of names", path=f"{path}.points")
    unique = obj.get("unique_trace", len(pts) == 1)
    if not isinstance(unique, bool):
        raise ModelError("unique_trace must be a boolean", path=f"{path}.unique_trace")
    try:
        return SimplexDescriptor(tuple(pts), unique)
    except ModelError as e:
        raise ModelError(e.args[0], path=path) from None


def _simplex_json(s: SimplexDescriptor) -> dict:
    return {"points": list(s.points), "unique_trace": s.unique_trace}


# --------------------------------------------------------------------------
# space models
# --------------------------------------------------------------------------

_MODEL_KEYS = ("cohomology", "ktheory", "unit_h", "unit_k", "traces", "flags", "simplex")
_TRACE_KEYS = ("name", "h0", "h1", "k0", "k1")


def _parse_flags(obj, path) -> dict:
    if not isinstance(obj, dict):
        raise ModelError("flags must be an object", path=path)
    out = {}
    for k, v in obj.items():
        if k not in FLAG_NAMES:
            raise ModelError(f"unknown flag {k!r}; known flags: {', '.join(FLAG_NAMES)}",
                             path=path)
        if k == "dimension":
            out[k] = parse_int(v, f"{path}.dimension")
        elif isinstance(v, bool):
            out[k] = v
        else:
            raise ModelError(f"flag {k!r} must be a boolean", path=f"{path}.{k}")
    return out


def parse_space_model(name: str, obj, path) -> SpaceModel:
    _keys(obj, _MODEL_KEYS, path, required=("cohomology",))
    coh_obj = obj["cohomology"]
    if not isinstance(coh_obj, dict):
        raise ModelError("cohomology must map degrees to modules", path=f"{path}.cohomology")
    coh = {parse_int(q, f"{path}.cohomology"): parse_module(m, f"{path}.cohomology.{q}")
           for q, m in coh_obj.items()}
    kt = None
    if "ktheory" in obj:
        k = obj["ktheory"]
        _keys(k, ("0", "1"), f"{path}.ktheory")
        empty = ZModule(PresentedGroup(0))
        kt = tuple(parse_module(k[i], f"{path}.ktheory.{i}") if i in k else empty
                   for i in ("0", "1"))
    traces = []
    for i, t in enumerate(obj.get("traces", [])):
        tp = f"{path}.traces[{i}]"
        _keys(t, _TRACE_KEYS, tp, required=("name",))
        traces.append(SpaceTrace(str(t["name"]), *(_reals(t.get(k, []), f"{tp}.{k}")
                                                   for k in _TRACE_KEYS[1:])))
    simplex = _parse_simplex(obj["simplex"], f"{path}.simplex") if "simplex" in obj else None
    try:
        return SpaceModel(
            name, coh, kt,
            unit_h=_int_list(obj["unit_h"], f"{path}.unit_h") if "unit_h" in obj else None,
            unit_k=_int_list(obj["unit_k"], f"{path}.unit_k") if "unit_k" in obj else None,
            traces=traces, flags=_parse_flags(obj.get("flags", {}), f"{path}.flags"),
            simplex=simplex)
    except ModelError as e:
        if e.path is None and e.line is None:
            raise ModelError(e.args[0], path=path) from None
        raise


def space_model_to_json(x: SpaceModel) -> dict:
    out = {"cohomology": {str(q): module_to_json(m) for q, m in sorted(x.cohomology.items())}}
    if x.ktheory is not None:
        out["ktheory"] = {"0": module_to_json(x.ktheory[0]), "1": module_to_json(x.ktheory[1])}
    if x.unit_h is not None:
        out["unit_h"] = list(x.unit_h)
    if x.unit_k is not None:
        out["unit_k"] = list(x.unit_k)
    if x.traces:
        ts = []
        for t in x.traces:
            d = {"name": t.name}
            for k in _TRACE_KEYS[1:]:
                vals = getattr(t, k)
                if vals:
                    d[k] = [_real_json(parse_real(v)) for v in vals]
            ts.append(d)
        out["traces"] = ts
    if x.flags:
        out["flags"] = dict(sorted(x.flags.items()))
    if x.simplex is not None:
        out["simplex"] = _simplex_json(x.simplex)
    return out


# --------------------------------------------------------------------------
# declared invariants
# --------------------------------------------------------------------------


@dataclass
class DeclaredModel:
    """A groupoid whose homology and K-theory are given directly rather than computed."""
    name: str
    homology: dict
    k0: PresentedGroup
    k1: PresentedGroup
    unit_h: list
    unit_k: list
    traces: list = field(default_factory=list)   # (name, values on H_ev, values on K_0)
    simplex: SimplexDescriptor = field(default_factory=SimplexDescriptor)

    def graded(self) -> GradedInvariant:
        return GradedInvariant({n: Resolved(g, g, PresentedGroup(0))
                                for n, g in self.homology.items()})

    def invariants(self) -> tuple[EllInvariant, EllInvariant]:
        h_ev, h_od = z2_grade(self.graded())
        k = EllInvariant(self.k0, self.k1, self.unit_k,
                         [TraceFunctional(n, kv) for n, _, kv in self.traces], self.simplex,
                         label=f"K({self.name})")
        h = EllInvariant(h_ev, h_od, self.unit_h,
                         [TraceFunctional(n, hv) for n, hv, _ in self.traces], self.simplex,
                         label=f"H({self.name})")
        return k, h


def parse_declared(name, obj, path) -> DeclaredModel:
    _keys(obj, ("homology", "ktheory", "unit_h", "unit_k", "traces", "simplex"), path,
          required=("homology", "ktheory", "unit_h", "unit_k"))
    hom = {parse_int(n, f"{path}.homology"): parse_group(g, f"{path}.homology.{n}")
           for n, g in obj["homology"].items()}
    kt = obj["ktheory"]
    _keys(kt, ("0", "1"), f"{path}.ktheory")
    k0 = parse_group(kt.get("0", {"free": 0}), f"{path}.ktheory.0")
    k1 = parse_group(kt.get("1", {"free": 0}), f"{path}.ktheory.1")
    traces = []
    for i, t in enumerate(obj.get("traces", [])):
        tp = f"{path}.traces[{i}]"
        _keys(t, ("name", "h", "k"), tp, required=("name", "h", "k"))
        traces.append((str(t["name"]), _reals(t["h"], f"{tp}.h"), _reals(t["k"], f"{tp}.k")))
    simplex = (_parse_simplex(obj["simplex"], f"{path}.simplex") if "simplex" in obj
               else SimplexDescriptor(tuple(t[0] for t in traces) or ("tau",),
                                      len(traces) <= 1))
    d = DeclaredModel(name, hom, k0, k1, _int_list(obj["unit_h"], f"{path}.unit_h"),
                      _int_list(obj["unit_k"], f"{path}.unit_k"), traces, simplex)
    try:
        d.invariants()
    except ModelError as e:
        raise ModelError(e.args[0], path=path) from None
    return d


def declared_to_json(d: DeclaredModel) -> dict:
    out = {"homology": {str(n): group_to_json(g) for n, g in sorted(d.homology.items())},
           "ktheory": {"0": group_to_json(d.k0), "1": group_to_json(d.k1)},
           "unit_h": list(d.unit_h), "unit_k": list(d.unit_k)}
    if d.traces:
        out["traces"] = [{"name": n, "h": [_real_json(v) for v in hv],
                          "k": [_real_json(v) for v in kv]} for n, hv, kv in d.traces]
    out["simplex"] = _simplex_json(d.simplex)
    return out


# --------------------------------------------------------------------------
# files
# --------------------------------------------------------------------------


@dataclass
class OrbitBreakSpec:
    x: str
    y: str
    split_declared: bool = False


@dataclass
class ModelFile:
    theta: Theta | None = None
    models: dict = field(default_factory=dict)
    orbit_breaks: dict = field(default_factory=dict)
    declared: dict = field(default_factory=dict)
    subject: str | None = None

    def names(self) -> list[str]:
        return list(self.models) + list(self.orbit_breaks) + list(self.declared)

    def resolve(self, name: str | None = None):
        """The named entry (default: the subject, else the only entry)."""
        name = name or self.subject
        if name is None:
            names = self.names()
            if len(names) != 1:
                raise ModelError("the file defines several entries; choose one with --name "
                                 f"({', '.join(names)})")
            name = names[0]
        if name in self.orbit_breaks:
            ob = self.orbit_breaks[name]
            return OrbitBreakInput(self.models[ob.x], self.models[ob.y], ob.split_declared,
                                   name=name)
        if name in self.declared:
            return self.declared[name]
        if name in self.models:
            return self.models[name]
        raise ModelError(f"no entry named {name!r}; available: {', '.join(self.names())}")

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA}
        if self.theta is not None:
            out["theta"] = self.theta.describe()
        if self.subject is not None:
            out["subject"] = self.subject
        out["models"] = {n: space_model_to_json(m) for n, m in self.models.items()}
        if self.orbit_breaks:
            out["orbit_breaks"] = {n: {"x": o.x, "y": o.y, "split_declared": o.split_declared}
                                   for n, o in self.orbit_breaks.items()}
        if self.declared:
            out["declared"] = {n: declared_to_json(d) for n, d in self.declared.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def __eq__(self, other):
        return isinstance(other, ModelFile) and self.to_dict() == other.to_dict()


def from_dict(obj) -> ModelFile:
    _keys(obj, ("schema", "theta", "subject", "models", "orbit_breaks", "declared"), "$",
          required=("schema",))
    if obj["schema"] != SCHEMA:
        raise ModelError(f"unsupported schema {obj['schema']!r} (expected {SCHEMA!r})",
                         path="$.schema")
    theta = None
    if "theta" in obj:
        try:
            theta = Theta.parse(obj["theta"])
        except ModelError as e:
            raise ModelError(e.args[0], path="$.theta") from None
    models_obj = obj.get("models", {})
    if not isinstance(models_obj, dict):
        raise ModelError("models must be an object", path="$.models")
    models = {n: parse_space_model(n, m, f"$.models.{n}") for n, m in models_obj.items()}
    obs = {}
    for n, o in obj.get("orbit_breaks", {}).items():
        p = f"$.orbit_breaks.{n}"
        _keys(o, ("x", "y", "split_declared"), p, required=("x", "y"))
        for role in ("x", "y"):
            if o[role] not in models:
                raise ModelError(f"unknown model {o[role]!r}", path=f"{p}.{role}")
        split = o.get("split_declared", False)
        if not isinstance(split, bool):
            raise ModelError("split_declared must be a boolean", path=f"{p}.split_declared")
        spec = OrbitBreakSpec(o["x"], o["y"], split)
        try:
            OrbitBreakInput(models[spec.x], models[spec.y], split)
        except ModelError as e:
            raise ModelError(e.args[0], path=p) from None
        obs[n] = spec
    declared = {n: parse_declared(n, d, f"$.declared.{n}")
                for n, d in obj.get("declared", {}).items()}
    subject = obj.get("subject")
    mf = ModelFile(theta, models, obs, declared, subject)
    if subject is not None and subject not in mf.names():
        raise ModelError(f"subject {subject!r} is not defined", path="$.subject")
    dup = set(models) & (set(obs) | set(declared)) or set(obs) & set(declared)
    if dup:
        raise ModelError(f"entry names must be unique: {', '.join(sorted(dup))}")
    return mf


def loads(text: str) -> ModelFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(e.msg, line=e.lineno, column=e.colno) from None
    return from_dict(obj)


def load(path) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)
