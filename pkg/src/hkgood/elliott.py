"""Elliott invariants and the HK-goodness decision.

An invariant is (even group, odd group, unit, traces), where each trace is
a homomorphism from the even group into Q + Qθ given by its values on the
presentation generators.  ``hk_check`` looks for isomorphisms between two
invariants that respect parity, unit and every trace.

The search works in standard coordinates T ⊕ Z^r (T the torsion part).
An automorphism there has block form [[τ, G], [0, F]] with F in GL_r(Z).
Traces vanish on T, so trace compatibility only constrains F; those linear
conditions are solved exactly and the integer solution set is enumerated up
to a coefficient bound.  The unit then fixes what τ and G must do.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Sequence

from .abelian import (GroupHom, PresentedGroup, is_isomorphic, preimage, simplify)
from .circle import RealExpr, parse_real
from .errors import HKError, ModelError, SearchBudgetExceeded
from .intmat import IntMatrix, lll_reduce, reduce_against, solve_integer, solve_rational


@dataclass(frozen=True)
class SimplexDescriptor:
    """Shape of the trace simplex: its named extreme points."""
    points: tuple = ("tau",)
    unique_trace: bool = True

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.unique_trace and len(self.points) != 1:
            raise ModelError("a unique trace simplex has exactly one extreme point")

    @property
    def dimension(self) -> int:
        return len(self.points) - 1

    def matches(self, other: "SimplexDescriptor") -> bool:
        return len(self.points) == len(other.points) and self.unique_trace == other.unique_trace

    @classmethod
    def point(cls, name: str = "tau") -> "SimplexDescriptor":
        return cls((name,), True)


class TraceFunctional:
    """Named trace with one value per presentation generator of the even group."""

    __slots__ = ("name", "values")

    def __init__(self, name: str, values: Sequence, group: PresentedGroup | None = None):
        self.name = name
        self.values = tuple(parse_real(v) for v in values)
        if group is not None:
            self.check(group)

    def check(self, group: PresentedGroup):
        if len(self.values) != group.ngens:
            raise ModelError(f"trace {self.name!r} has {len(self.values)} values for "
                             f"{group.ngens} generators")
        for j, col in enumerate(group.relations.columns()):
            v = evaluate(self.values, col)
            if not v.is_zero():
                raise ModelError(f"trace {self.name!r} does not vanish on relation {j} "
                                 f"(value {v})")

    def __call__(self, x: Sequence[int]) -> RealExpr:
        return evaluate(self.values, x)

    def __repr__(self):
        return f"TraceFunctional({self.name!r}, {[str(v) for v in self.values]})"


def evaluate(values: Sequence[RealExpr], x: Sequence[int]) -> RealExpr:
    total = RealExpr(0)
    for v, c in zip(values, x):
        if c:
            total = total + v * c
    return total


@dataclass
class EllInvariant:
    even: PresentedGroup
    odd: PresentedGroup
    unit: list
    traces: list = field(default_factory=list)
    simplex: SimplexDescriptor = field(default_factory=SimplexDescriptor)
    label: str = ""

    def __post_init__(self):
        self.unit = [int(c) for c in self.unit]
        if len(self.unit) != self.even.ngens:
            raise ModelError(f"unit has {len(self.unit)} coordinates for {self.even.ngens} "
                             "generators")
        for t in self.traces:
            t.check(self.even)
        if len(self.traces) != len(self.simplex.points):
            raise ModelError(f"{len(self.traces)} traces for a simplex with "
                             f"{len(self.simplex.points)} extreme points")

    def describe(self) -> list[str]:
        lines = [f"even ≅ {self.even}", f"odd ≅ {self.odd}",
                 f"unit = {list(self.even.canonical_coords(self.unit))} (standard coordinates)"]
        std = simplify(self.even)
        for t in self.traces:
            vals = [str(evaluate(t.values, g)) for g in std.from_standard.matrix.columns()]
            lines.append(f"trace {t.name}: {vals} on standard generators")
        return lines


def pairing_eval(inv: EllInvariant, even: Sequence[int],
                 odd: Sequence[int] | None = None) -> list[RealExpr]:
    """Trace values of an element; the odd part pairs to zero."""
    if len(even) != inv.even.ngens:
        raise ValueError("element does not belong to the even group")
    if odd is not None and len(odd) != inv.odd.ngens:
        raise ValueError("element does not belong to the odd group")
    return [t(even) for t in inv.traces]


# --------------------------------------------------------------------------
# the decision procedure
# --------------------------------------------------------------------------


class Status(str, Enum):
    GOOD = "GOOD"
    NOT_GOOD = "NOT_GOOD"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class HKVerdict:
    status: Status
    layer: str | None = None
    reason: str = ""
    even_witness: IntMatrix | None = None
    odd_witness: IntMatrix | None = None

    @property
    def good(self) -> bool:
        return self.status is Status.GOOD


def _content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def _std_traces(inv: EllInvariant, std) -> list[list[RealExpr]]:
    cols = std.from_standard.matrix.columns()
    return [[evaluate(t.values, c) for c in cols] for t in inv.traces]


def _torsion_automorphisms(orders: Sequence[int], budget: int):
    """All automorphisms of Z/d_1 ⊕ ... ⊕ Z/d_t as lists of image columns."""
    t = len(orders)
    total = 1
    for d in orders:
        total *= d
    if total ** t > budget:
        raise SearchBudgetExceeded(f"torsion automorphism search needs {total ** t} candidates,"
                                   f" budget is {budget}")
    tors = PresentedGroup.from_invariants(0, orders)
    # the image of generator j must be killed by d_j
    choices = []
    for dj in orders:
        opts = [x for x in itertools.product(*[range(d) for d in orders])
                if all((dj * xi) % di == 0 for xi, di in zip(x, orders))]
        choices.append(opts)
    for cols in itertools.product(*choices):
        m = IntMatrix.from_columns([list(c) for c in cols], t)
        h = GroupHom(tors, tors, m, check=False)
        if h.is_surjective():
            yield m


def _free_candidates(constraints, r: int, bound: int, budget: int):
    """Integer r×r matrices satisfying the linear constraints, smallest first.

    Yields ``(F, exhaustive)``; ``exhaustive`` is True when the solution set
    is finite (so the enumeration below is complete).
    """
    rows, rhs = constraints
    sol = solve_rational(rows, rhs, r * r)
    if sol is None:
        return
    x0, ker = sol
    ker = lll_reduce(ker)
    x0 = reduce_against(x0, ker)
    k = ker.cols
    if k == 0:
        yield IntMatrix([x0[i * r:(i + 1) * r] for i in range(r)], r, r), True
        return
    count = 0
    for radius in range(bound + 1):
        for lam in itertools.product(range(-radius, radius + 1), repeat=k):
            if max((abs(v) for v in lam), default=0) != radius:
                continue
            count += 1
            if count > budget:
                raise SearchBudgetExceeded(f"free-part search exceeded {budget} candidates")
            x = list(x0)
            for j, c in enumerate(lam):
                if c:
                    col = ker.column(j)
                    x = [a + c * b for a, b in zip(x, col)]
            yield IntMatrix([x[i * r:(i + 1) * r] for i in range(r)], r, r), False


def hk_check(k_side: EllInvariant, h_side: EllInvariant, budget: int = 10 ** 4,
             coeff_bound: int = 3) -> HKVerdict:
    """Decide whether the two invariants are isomorphic (unit and traces included)."""
    if not k_side.simplex.matches(h_side.simplex):
        raise HKError("trace simplices do not match structurally")
    if not is_isomorphic(k_side.even, h_side.even):
        return HKVerdict(Status.NOT_GOOD, "group",
                         f"even groups differ: {k_side.even} vs {h_side.even}")
    if not is_isomorphic(k_side.odd, h_side.odd):
        return HKVerdict(Status.NOT_GOOD, "group",
                         f"odd groups differ: {k_side.odd} vs {h_side.odd}")

    so_k, so_h = simplify(k_side.odd), simplify(h_side.odd)
    odd_w = so_h.from_standard.compose(so_k.to_standard).matrix

    sk, sh = simplify(k_side.even), simplify(h_side.even)
    orders = sk.group.standard_orders()
    t = sum(1 for d in orders if d)
    r = len(orders) - t
    tors_orders = orders[:t]
    u = list(sk.to_standard(k_side.unit))
    w = list(sh.to_standard(h_side.unit))
    u = [c % d for c, d in zip(u[:t], tors_orders)] + u[t:]
    w = [c % d for c, d in zip(w[:t], tors_orders)] + w[t:]
    ut, uf, wt, wf = u[:t], u[t:], w[:t], w[t:]

    # necessary unit conditions
    if _content(uf) != _content(wf) or (sk.group.element_order(u)
                                        != sh.group.element_order(w)):
        return HKVerdict(Status.NOT_GOOD, "unit",
                         "no group automorphism can match the units")

    ck = _std_traces(k_side, sk)
    ch = _std_traces(h_side, sh)
    for name, vals in (("K", ck), ("H", ch)):
        for tr in vals:
            if any(not v.is_zero() for v in tr[:t]):
                raise AssertionError(f"{name}-side trace is nonzero on torsion")

    # linear conditions on F (row-major unknowns F[i][j])
    rows, rhs = [], []
    for trk, trh in zip(ck, ch):
        for part in ("a", "b"):
            for j in range(r):
                row = [0] * (r * r)
                for i in range(r):
                    row[i * r + j] = getattr(trh[t + i], part)
                rows.append(row)
                rhs.append(getattr(trk[t + j], part))
    for i in range(r):
        row = [0] * (r * r)
        for j in range(r):
            row[i * r + j] = uf[j]
        rows.append(row)
        rhs.append(wf[i])

    if r == 0:
        free_iter = iter([(IntMatrix.zeros(0, 0), True)])
    else:
        free_iter = _free_candidates((rows, rhs), r, coeff_bound, budget)

    g = _content(uf)
    tors = PresentedGroup.from_invariants(0, tors_orders)
    exhaustive = True
    found_free = False
    try:
        for F, complete in free_iter:
            exhaustive = complete
            if abs(F.det()) != 1:
                continue
            found_free = True
            res = _torsion_block(tors, tors_orders, ut, uf, wt, g, budget)
            if res is None:
                continue
            tau, G = res
            phi = IntMatrix.vstack([IntMatrix.hstack([tau, G], rows=t),
                                    IntMatrix.hstack([IntMatrix.zeros(r, t), F], rows=r)],
                                   cols=t + r)
            std_phi = GroupHom(sk.group, sh.group, phi)
            wit = sh.from_standard.compose(std_phi.compose(sk.to_standard))
            _verify_witness(k_side, h_side, wit.matrix, odd_w)
            return HKVerdict(Status.GOOD, None, "isomorphism found", wit.matrix, odd_w)
    except SearchBudgetExceeded as exc:
        return HKVerdict(Status.UNDECIDED, None, str(exc))
    if exhaustive:
        if not found_free:
            return HKVerdict(Status.NOT_GOOD, "pairing",
                             "no unimodular free part matches the unit and the traces")
        return HKVerdict(Status.NOT_GOOD, "unit",
                         "no torsion automorphism matches the unit")
    return HKVerdict(Status.UNDECIDED, None,
                     f"no witness with coefficients up to {coeff_bound}; search incomplete")


def _torsion_block(tors, orders, ut, uf, wt, g, budget):
    """τ in Aut(T) and G: Z^r -> T with τ(ut) + G(uf) = wt."""
    t, r = len(orders), len(uf)

    def attempt(tau: IntMatrix):
        z = [(a - b) % d for a, b, d in zip(wt, tau.apply(ut), orders)]
        if r == 0 or g == 0:
            return IntMatrix.zeros(t, r) if all(c == 0 for c in z) else None
        mult = GroupHom(tors, tors, IntMatrix.identity(t).scale(g), check=False)
        y = preimage(mult, z)
        if y is None:
            return None
        s = solve_integer(IntMatrix([uf], 1, r), [g])
        return IntMatrix([[yi * sj for sj in s] for yi in y], t, r)

    ident = IntMatrix.identity(t)
    G = attempt(ident)
    if G is not None:
        return ident, G
    for tau in _torsion_automorphisms(orders, budget):
        G = attempt(tau)
        if G is not None:
            return tau, G
    return None


def _verify_witness(k_side: EllInvariant, h_side: EllInvariant, even_w: IntMatrix,
                    odd_w: IntMatrix):
    phi0 = GroupHom(k_side.even, h_side.even, even_w)
    phi1 = GroupHom(k_side.odd, h_side.odd, odd_w)
    if not (phi0.is_isomorphism() and phi1.is_isomorphism()):
        raise AssertionError("witness is not an isomorphism")
    if not h_side.even.equal(phi0(k_side.unit), h_side.unit):
        raise AssertionError("witness does not send unit to unit")
    for tk, th in zip(k_side.traces, h_side.traces):
        for j in range(k_side.even.ngens):
            e = [int(i == j) for i in range(k_side.even.ngens)]
            if th(phi0(e)) != tk(e):
                raise AssertionError(f"witness breaks trace {tk.name!r} on generator {j}")


def witness_is_valid(k_side: EllInvariant, h_side: EllInvariant, verdict: HKVerdict) -> bool:
    if not verdict.good:
        return False
    try:
        _verify_witness(k_side, h_side, verdict.even_witness, verdict.odd_witness)
    except (AssertionError, HKError):
        return False
    return True


# --------------------------------------------------------------------------
# invariants of crossed products Z ⋉ X
# --------------------------------------------------------------------------


def _end_values(module, values, part: str):
    """Trace values on the generators of coinv (``part='sub'``) or inv of a module."""
    from .zaction import PresentedEnds, invariants_with_map
    values = [parse_real(v) for v in values]
    if part == "sub":
        n = module.coinvariants.ngens if isinstance(module, PresentedEnds) else module.group.ngens
        return _pad(values, n)
    if isinstance(module, PresentedEnds):
        return _pad(values, module.invariants.ngens)
    igroup, inc = invariants_with_map(module)
    values = _pad(values, module.group.ngens)
    return [evaluate(values, col) for col in inc.matrix.columns()]


def _pad(values, n):
    if len(values) > n:
        raise ModelError(f"{len(values)} trace values for {n} generators")
    return list(values) + [RealExpr(0)] * (n - len(values))


def _simplex_for(x) -> SimplexDescriptor:
    if x.simplex is not None:
        return x.simplex
    names = tuple(t.name for t in x.traces) or ("tau",)
    return SimplexDescriptor(names, len(names) == 1)


def crossed_product_invariants(x) -> tuple[EllInvariant, EllInvariant]:
    """(K-side, H-side) invariants of Z ⋉ X from a space model."""
    from .mapping_torus import pv_ktheory
    from .zaction import (Resolved, groupoid_homology_from_cohomology, z2_grade)
    from .errors import AmbiguousExtension
    pv = pv_ktheory(x)
    k0, k1 = pv.groups()
    simplex = _simplex_for(x)

    k_traces = []
    for tr in x.traces:
        vals = (_end_values(x.k_module(0), tr.k0, "sub")
                + _end_values(x.k_module(1), tr.k1, "inv"))
        k_traces.append(TraceFunctional(tr.name, vals))
    if x.unit_k is None:
        raise ModelError(f"model {x.name!r} declares no K-theory unit")
    k_inv = EllInvariant(k0, k1, pv.unit_image, k_traces, simplex, label=f"K({x.name})")

    graded = groupoid_homology_from_cohomology(x)
    h_ev, h_od = z2_grade(graded)
    e0 = graded.at(0)
    if not isinstance(e0, Resolved):
        raise AmbiguousExtension("H_0 is only known up to extension")
    n0 = e0.group.ngens
    sub_n = e0.sub.ngens if e0.sub is not None else 0
    h_traces = []
    for tr in x.traces:
        vals = []
        if n0:
            vals = (_end_values(x.h_module(0), tr.h0, "sub")
                    + _end_values(x.h_module(1), tr.h1, "inv"))
        vals += [RealExpr(0)] * (h_ev.ngens - len(vals))
        h_traces.append(TraceFunctional(tr.name, vals))
    if x.unit_h is None:
        raise ModelError(f"model {x.name!r} declares no H^0 unit")
    unit_h = list(x.unit_h) + [0] * (h_ev.ngens - len(x.unit_h))
    if sub_n != len(x.unit_h):
        raise AssertionError("H_0 summand layout does not match the H^0 unit")
    h_inv = EllInvariant(h_ev, h_od, unit_h, h_traces, simplex, label=f"H({x.name})")
    return k_inv, h_inv
