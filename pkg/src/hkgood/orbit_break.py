"""Orbit-breaking subgroupoids R_Y ⊆ R_φ of a free Z-system (X, φ).

Y ⊆ X is closed, meets each orbit at most once, and carries no action.  The
pair (R_φ, R_Y) gives a long exact sequence

    H^{-n}(Y) -> H_n(R_Y) -> H_n(R_φ) -> H^{1-n}(Y) -> H_{n-1}(R_Y) -> ...

When X has the cohomology of a zero-dimensional space (K^0 = H^0 = C(X, Z),
everything else zero), the action is minimal and Y is connected, the
sequence collapses:

    H_0(R_Y) ≅ H_0(R_φ) ≅ coinv H^0(X),   H_n(R_Y) ≅ H^{-n}(Y) for n < 0,

and the K-theory is K_0(R_φ) ⊕ K̃^0(Y) in even degree, K^1(Y) in odd degree
(the even sum needs a splitting unless K_0(R_φ) is free).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abelian import (GroupHom, PresentedGroup, cokernel, direct_sum, is_isomorphic,
                      simplify)
from .circle import RealExpr, parse_real
from .complexes import Exactness, verify_exact
from .elliott import (EllInvariant, HKVerdict, SimplexDescriptor, TraceFunctional,
                      _end_values, hk_check)
from .errors import HKError, HypothesisViolated, ModelError
from .intmat import IntMatrix
from .mapping_torus import PvResult, pv_ktheory
from .zaction import (Ambiguous, GradedInvariant, PresentedEnds, Resolved, SpaceModel,
                      SpaceTrace, ZModule, _is_zero_module, coinvariants,
                      groupoid_homology_from_cohomology, invariants, module_group, z2_grade)

CLAUSES = (
    "K^0(X) = C(X,Z) = H^0(X)",
    "K^1(X) = 0",
    "H^i(X) = 0 for i >= 1",
    "action minimal: H^0(X) invariants are Z",
    "Y connected",
    "Y dimension <= 3",
    "quotient map on K_0 splits",
)


@dataclass
class OrbitBreakInput:
    x_model: SpaceModel
    y_model: SpaceModel
    split_declared: bool = False
    name: str = ""

    def __post_init__(self):
        y = self.y_model
        if not y.trivial_action() or (y.ktheory is not None and not y.k_trivial_action()):
            raise ModelError(f"Y model {y.name!r} must carry the trivial action")


def _ends_equal(a, b) -> bool:
    return (is_isomorphic(coinvariants(a), coinvariants(b))
            and is_isomorphic(invariants(a), invariants(b)))


def hypotheses(inp: OrbitBreakInput) -> dict[str, bool | None]:
    """Each clause mapped to True/False, or None when the data cannot decide it."""
    x, y = inp.x_model, inp.y_model
    out: dict[str, bool | None] = {}
    if x.ktheory is None:
        out[CLAUSES[0]] = None
        out[CLAUSES[1]] = None
    else:
        out[CLAUSES[0]] = _ends_equal(x.k_module(0), x.h_module(0))
        out[CLAUSES[1]] = _is_zero_module(x.k_module(1))
    out[CLAUSES[2]] = all(_is_zero_module(m) for q, m in x.cohomology.items() if q >= 1)
    out[CLAUSES[3]] = is_isomorphic(invariants(x.h_module(0)), PresentedGroup.free(1))
    out[CLAUSES[4]] = bool(y.flags.get("connected"))
    dim = y.flags.get("dimension")
    out[CLAUSES[5]] = None if dim is None else dim <= 3
    out[CLAUSES[6]] = bool(inp.split_declared)
    return out


def _require_nonempty(inp: OrbitBreakInput):
    if _is_zero_module(inp.y_model.h_module(0)):
        raise HypothesisViolated(f"Y model {inp.y_model.name!r} is empty (H^0 = 0)",
                                 clause="Y nonempty")


def _require(inp: OrbitBreakInput, clauses: Sequence[str]):
    got = hypotheses(inp)
    for c in clauses:
        if not got[c]:
            state = "undetermined" if got[c] is None else "false"
            raise HypothesisViolated(f"hypothesis {c!r} is {state} for "
                                     f"{inp.name or inp.x_model.name!r}", clause=c)


# --------------------------------------------------------------------------
# homology
# --------------------------------------------------------------------------


def orbit_break_homology(inp: OrbitBreakInput, require_dimension: bool = True) -> GradedInvariant:
    """Groupoid homology of R_Y.

    The dimension clause is only needed for the Chern identification; pass
    ``require_dimension=False`` to compute the groups for higher-dimensional Y.
    """
    _require_nonempty(inp)
    clauses = list(CLAUSES[:5])
    if require_dimension:
        clauses.append(CLAUSES[5])
    _require(inp, clauses)
    h_phi = groupoid_homology_from_cohomology(inp.x_model)
    entries = {0: h_phi.at(0)}
    for q, m in inp.y_model.cohomology.items():
        if q >= 1 and not _is_zero_module(m):
            g = module_group(m)
            entries[-q] = Resolved(g, g, PresentedGroup(0))
    return GradedInvariant(entries)


@dataclass
class LesNode:
    label: str
    group: PresentedGroup | None


@dataclass
class OrbitBreakLES:
    nodes: list
    maps: list
    isomorphisms: list = field(default_factory=list)
    exactness: Exactness | None = None
    determined: bool = False

    def format(self) -> list[str]:
        lines = []
        for node in self.nodes:
            g = "?" if node.group is None else str(node.group)
            lines.append(f"{node.label} ≅ {g}")
        lines.extend(f"iso: {s}" for s in self.isomorphisms)
        if self.exactness is None:
            lines.append("exactness: not all maps determined")
        else:
            lines.append("exactness: " + ("verified" if self.exactness.ok
                                          else f"fails at node {self.exactness.node}"))
        return lines


def _rank_one_iso(a: PresentedGroup, b: PresentedGroup) -> GroupHom:
    sa, sb = simplify(a), simplify(b)
    return sb.from_standard.compose(sa.to_standard)


def orbit_break_les(inp: OrbitBreakInput) -> OrbitBreakLES:
    """Assemble the long exact sequence of the pair (R_φ, R_Y), top degree first."""
    _require_nonempty(inp)
    x, y = inp.x_model, inp.y_model
    h_phi = groupoid_homology_from_cohomology(x)
    y_top = max([q for q, m in y.cohomology.items() if not _is_zero_module(m)], default=0)
    hyp = hypotheses(inp)
    collapse = all(hyp[c] for c in CLAUSES[:5])
    h_y = orbit_break_homology(inp, require_dimension=False) if collapse else None

    def yg(q):
        return module_group(y.h_module(q)) if q >= 0 else PresentedGroup(0)

    def phi_g(n):
        e = h_phi.at(n)
        return None if isinstance(e, Ambiguous) else e.group

    def ry_g(n):
        return None if h_y is None else h_y.group(n)

    top = max(h_phi.degrees() + [1])
    nodes, triples = [], []
    for n in range(top, -y_top - 1, -1):
        triples.append((LesNode(f"H^{-n}(Y)", yg(-n)), LesNode(f"H_{n}(R_Y)", ry_g(n)),
                        LesNode(f"H_{n}(R_phi)", phi_g(n)), n))
    for a, b, c, _ in triples:
        nodes.extend([a, b, c])
    nodes.append(LesNode(f"H^{y_top + 1}(Y)", PresentedGroup(0)))

    isos = []
    if h_y is None or any(nd.group is None for nd in nodes):
        return OrbitBreakLES(nodes, [], isos, None, False)

    maps = []
    for i, (a, b, c, n) in enumerate(triples):
        nxt = triples[i + 1][0] if i + 1 < len(triples) else nodes[-1]
        if n < 0:
            maps.append(GroupHom.identity(a.group))
            isos.append(f"{a.label} -> {b.label}")
        else:
            maps.append(GroupHom.zero(a.group, b.group))
        if n == 0:
            maps.append(GroupHom.identity(b.group))
            isos.append(f"{b.label} -> {c.label}")
        else:
            maps.append(GroupHom.zero(b.group, c.group))
        if n == 1:
            maps.append(_rank_one_iso(c.group, nxt.group))
            isos.append(f"{c.label} -> {nxt.label}")
        else:
            maps.append(GroupHom.zero(c.group, nxt.group))
    return OrbitBreakLES(nodes, maps, isos, verify_exact(maps), True)


# --------------------------------------------------------------------------
# K-theory
# --------------------------------------------------------------------------


def reduced_k0(y: SpaceModel) -> tuple[PresentedGroup, GroupHom]:
    """K̃^0(Y) as K^0(Y) modulo the class of the unit, with the projection."""
    if y.ktheory is None or y.unit_k is None:
        raise ModelError(f"Y model {y.name!r} needs K-theory and a unit")
    k0 = module_group(y.k_module(0))
    unit = GroupHom(PresentedGroup.free(1), k0, IntMatrix.from_columns([list(y.unit_k)],
                                                                         k0.ngens))
    return cokernel(unit)


def orbit_break_ktheory(inp: OrbitBreakInput) -> PvResult:
    """K_0 = K_0(R_φ) ⊕ K̃^0(Y) (K_0(R_φ) generators first), K_1 = K^1(Y)."""
    _require_nonempty(inp)
    _require(inp, [CLAUSES[0], CLAUSES[1], CLAUSES[3], CLAUSES[4]])
    pv = pv_ktheory(inp.x_model)
    if isinstance(pv.k0, Ambiguous):
        raise HKError("K_0 of the crossed product is only known up to extension")
    k0_phi = pv.k0.group
    red, _ = reduced_k0(inp.y_model)
    if inp.split_declared or k0_phi.is_free() or red.is_trivial():
        k0 = Resolved(direct_sum([k0_phi, red]), red, k0_phi)
    else:
        k0 = Ambiguous(red, k0_phi)
    k1_group = module_group(inp.y_model.k_module(1))
    k1 = Resolved(k1_group, k1_group, PresentedGroup(0))
    unit = list(pv.unit_image) + [0] * red.ngens if pv.unit_image is not None else None
    return PvResult(k0, k1, unit)


# --------------------------------------------------------------------------
# Elliott invariants
# --------------------------------------------------------------------------


@dataclass
class OrbitBreakInvariant:
    """Both invariants of R_Y, the verdict of the HK check and the hypothesis record."""
    k_side: EllInvariant
    h_side: EllInvariant
    verdict: HKVerdict
    hypotheses: dict

    @property
    def predicted_good(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def hk_good(self) -> bool:
        return self.verdict.good


def _simplex(x: SpaceModel) -> SimplexDescriptor:
    if x.simplex is not None:
        return x.simplex
    names = tuple(t.name for t in x.traces) or ("tau",)
    return SimplexDescriptor(names, len(names) == 1)


def orbit_break_invariants(inp: OrbitBreakInput, require_dimension: bool = True,
                           budget: int = 10 ** 4) -> OrbitBreakInvariant:
    x = inp.x_model
    kt = orbit_break_ktheory(inp)
    k0, k1 = kt.groups()
    simplex = _simplex(x)
    k_traces = []
    for tr in x.traces:
        # traces factor through K_0(R_φ); they vanish on the K̃^0(Y) summand
        vals = _end_values(x.k_module(0), tr.k0, "sub")
        vals += [RealExpr(0)] * (k0.ngens - len(vals))
        k_traces.append(TraceFunctional(tr.name, vals))
    if x.unit_k is None:
        raise ModelError(f"model {x.name!r} declares no K-theory unit")
    k_inv = EllInvariant(k0, k1, kt.unit_image, k_traces, simplex,
                         label=f"K(R_Y) for {inp.name or x.name}")

    hom = orbit_break_homology(inp, require_dimension=require_dimension)
    h_ev, h_od = z2_grade(hom)
    h_traces = []
    for tr in x.traces:
        vals = _end_values(x.h_module(0), tr.h0, "sub")
        vals += [RealExpr(0)] * (h_ev.ngens - len(vals))
        h_traces.append(TraceFunctional(tr.name, vals))
    if x.unit_h is None:
        raise ModelError(f"model {x.name!r} declares no H^0 unit")
    unit_h = list(x.unit_h) + [0] * (h_ev.ngens - len(x.unit_h))
    h_inv = EllInvariant(h_ev, h_od, unit_h, h_traces, simplex,
                         label=f"H(R_Y) for {inp.name or x.name}")
    return OrbitBreakInvariant(k_inv, h_inv, hk_check(k_inv, h_inv, budget=budget),
                               hypotheses(inp))


def _free_and_torsion(g: PresentedGroup) -> tuple[PresentedGroup, PresentedGroup]:
    return PresentedGroup.free(g.free_rank), PresentedGroup.from_invariants(0, g.invariant_factors)


def y_model_for(g_even: PresentedGroup, g_odd: PresentedGroup, name: str = "Y",
                dimension: int = 3) -> SpaceModel:
    """A connected Y with H^2 = g_even, H^1 ⊕ H^3 = g_odd (free part in H^1), no other
    reduced cohomology, and K-theory Z ⊕ g_even, g_odd."""
    free, tors = _free_and_torsion(g_odd)
    coh = {0: ZModule(PresentedGroup.free(1))}
    for q, g in ((1, free), (2, g_even), (3, tors)):
        if not g.is_trivial():
            coh[q] = ZModule(g)
    k0 = direct_sum([PresentedGroup.free(1), g_even])
    return SpaceModel(name, coh, (ZModule(k0), ZModule(g_odd)), unit_h=[1],
                      unit_k=[1] + [0] * g_even.ngens,
                      flags={"connected": True, "dimension": dimension})


def pointlike_input(g0: PresentedGroup, g1: PresentedGroup,
                    simplex: SimplexDescriptor | None = None) -> OrbitBreakInput:
    simplex = simplex or SimplexDescriptor.point()
    traces = [SpaceTrace(p, h0=[1], k0=[1]) for p in simplex.points]
    z = ZModule(PresentedGroup.free(1))
    x = SpaceModel("Z", {0: z}, (z, ZModule(PresentedGroup(0))), unit_h=[1], unit_k=[1],
                   traces=traces, flags={"connected": True}, simplex=simplex)
    return OrbitBreakInput(x, y_model_for(g0, g1), split_declared=True, name="point-like")


def pointlike_invariant(g0: PresentedGroup, g1: PresentedGroup,
                        simplex: SimplexDescriptor | None = None) -> OrbitBreakInvariant:
    """Invariant of the orbit-breaking groupoid realising (Z ⊕ g0, g1, (1, 0), ρ(n, g) = n)."""
    return orbit_break_invariants(pointlike_input(g0, g1, simplex))


def cantorlike_input(g0: PresentedGroup, unit: Sequence[int], trace_values: Sequence[Sequence],
                     t: PresentedGroup, g1: PresentedGroup,
                     simplex: SimplexDescriptor | None = None) -> OrbitBreakInput:
    simplex = simplex or SimplexDescriptor.point()
    if len(trace_values) != len(simplex.points):
        raise ModelError(f"{len(trace_values)} trace value lists for "
                         f"{len(simplex.points)} extreme points")
    traces = []
    for p, vals in zip(simplex.points, trace_values):
        vals = [parse_real(v) for v in vals]
        traces.append(SpaceTrace(p, h0=vals, k0=vals))
    ends = PresentedEnds(g0, PresentedGroup.free(1))
    x = SpaceModel("K", {0: ends}, (ends, ZModule(PresentedGroup(0))), unit_h=list(unit),
                   unit_k=list(unit), traces=traces, simplex=simplex)
    return OrbitBreakInput(x, y_model_for(t, g1), split_declared=True, name="cantor-like")


def cantorlike_invariant(g0: PresentedGroup, unit: Sequence[int],
                         trace_values: Sequence[Sequence], t: PresentedGroup,
                         g1: PresentedGroup,
                         simplex: SimplexDescriptor | None = None) -> OrbitBreakInvariant:
    """Invariant realising (g0 ⊕ t, g1, (u, 0), ρ(g, t) = δ(g)) for a presented
    dimension group g0 with order unit ``unit`` and state values ``trace_values``."""
    return orbit_break_invariants(cantorlike_input(g0, unit, trace_values, t, g1, simplex))
