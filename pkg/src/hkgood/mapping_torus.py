"""K-theory of Z-crossed products, mapping-torus cohomology, Chern predicates.

The K-theory of C(X) ⋊ Z sits in

    0 -> coinv(K^i(X)) -> K_i -> inv(K^{i+1}(X)) -> 0

and the cohomology of the mapping torus M_α in

    0 -> coinv(H^{i-1}(X)) -> H^i(M_α) -> inv(H^i(X)) -> 0.

Both use the same splitting policy as :mod:`hkgood.zaction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import PresentedGroup, direct_sum, is_isomorphic
from .errors import HKError, NotIntegral
from .zaction import (Ambiguous, GradedInvariant, Resolved, SpaceModel, coinvariants,
                      ends_graded, invariants, module_group, split_entry)


@dataclass(frozen=True)
class PvResult:
    k0: object
    k1: object
    unit_image: list | None

    def entry(self, i: int):
        return self.k0 if i % 2 == 0 else self.k1

    def groups(self) -> tuple[PresentedGroup, PresentedGroup]:
        return (GradedInvariant({0: self.k0}).group(0), GradedInvariant({1: self.k1}).group(1))

    def format(self) -> list[str]:
        lines = []
        for i, e in ((0, self.k0), (1, self.k1)):
            if isinstance(e, Ambiguous):
                lines.append(f"K_{i}: extension of {e.quotient} by {e.sub}")
            else:
                lines.append(f"K_{i} ≅ {e.group}")
        return lines


def pv_ktheory(x: SpaceModel) -> PvResult:
    if x.ktheory is None:
        raise HKError(f"model {x.name!r} carries no K-theory data")
    trivial = x.k_trivial_action()
    entries = []
    for i in (0, 1):
        sub = coinvariants(x.k_module(i))
        quot = invariants(x.k_module(i + 1))
        entries.append(split_entry(sub, quot, trivial))
    unit = None
    if x.unit_k is not None:
        # coinvariants are presented on the K^0 generators, so the unit keeps
        # its coordinates and the invariant summand gets zeros
        e = entries[0]
        nq = (e.quotient.ngens if isinstance(e, (Resolved, Ambiguous)) and e.quotient is not None
              else 0)
        unit = list(x.unit_k) + [0] * nq
    return PvResult(entries[0], entries[1], unit)


def mapping_torus_cohomology(x: SpaceModel) -> GradedInvariant:
    qs = list(x.cohomology)
    if not qs:
        return GradedInvariant({})
    degrees = sorted({q for q in qs} | {q + 1 for q in qs}, reverse=True)
    return ends_graded(x.cohomology, lambda i: i - 1, lambda i: i, degrees, x.trivial_action())


# --------------------------------------------------------------------------
# Chern predicates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChernVerdict:
    condition_i: bool
    condition_ii: bool
    reasons: tuple = ()

    @property
    def hk_good_predicted(self) -> bool:
        return self.condition_i or self.condition_ii


def _k_free(x: SpaceModel) -> bool | None:
    if x.ktheory is None:
        return None
    out = True
    for m in x.ktheory:
        if not hasattr(m, "group"):
            return None
        out = out and m.group.is_free()
    return out


def chern_conditions(x: SpaceModel) -> ChernVerdict:
    reasons = []
    flags = x.flags
    dim = flags.get("dimension")
    low = dim is not None and dim <= 3
    top = x.top_degree()

    cup = flags.get("cup_trivial")
    if cup is None and flags.get("suspension"):
        cup = True
        reasons.append("cup products vanish: the space is a suspension")

    cls_iso = flags.get("chern_class_iso")
    if cls_iso is None and low:
        cls_iso = True
        reasons.append(f"Chern class map is an isomorphism: dimension {dim} is at most 3")
    cond_i = top <= 3 and bool(cls_iso)
    if top > 3:
        reasons.append(f"(i) fails: cohomology is nonzero in degree {top}")
    elif not cls_iso:
        reasons.append("(i) fails: the Chern class map is not known to be an isomorphism")
    else:
        reasons.append("(i) holds")

    integral = flags.get("chern_integral")
    if integral is None:
        if flags.get("product_of_spheres"):
            integral = True
            reasons.append("integral Chern isomorphism: product of spheres")
        elif low:
            integral = True
            reasons.append(f"integral Chern isomorphism: dimension {dim} is at most 3")
    free = _k_free(x)
    cond_ii = bool(integral) and bool(free)
    if not integral:
        reasons.append("(ii) fails: no integral Chern isomorphism is known")
    elif free is None:
        reasons.append("(ii) fails: freeness of K^*(X) cannot be read off the data")
    elif not free:
        tors = [str(module_group(m)) for m in x.ktheory if not module_group(m).is_free()]
        reasons.append("(ii) fails: K-theory has torsion (" + ", ".join(tors) + ")")
    else:
        reasons.append("(ii) holds")
    return ChernVerdict(cond_i, cond_ii, tuple(reasons))


@dataclass(frozen=True)
class EndMatch:
    label: str
    k_group: PresentedGroup
    h_group: PresentedGroup
    rank_match: bool
    torsion_match: bool

    @property
    def match(self) -> bool:
        return self.rank_match and self.torsion_match


@dataclass(frozen=True)
class Correspondence:
    rows: tuple
    totals: tuple
    unit_k: list | None
    unit_h: list | None
    rational: bool

    def ok(self) -> bool:
        rows = list(self.rows) + list(self.totals)
        if self.rational:
            return all(r.rank_match for r in rows)
        return all(r.match for r in rows)


def _sum_ends(x: SpaceModel, parity: int, end) -> PresentedGroup:
    return direct_sum([end(m) for q, m in sorted(x.cohomology.items()) if q % 2 == parity])


def chern_assemble(x: SpaceModel, rational: bool = False) -> Correspondence:
    """Pair the ends of K_* with the ends of H_* degree by degree."""
    if not rational:
        verdict = chern_conditions(x)
        if not verdict.hk_good_predicted:
            raise NotIntegral(f"no integral Chern identification for {x.name!r}: "
                              + "; ".join(verdict.reasons))
    if x.ktheory is None:
        if not x.cohomology:
            return Correspondence((), (), None, None, rational)
        raise HKError(f"model {x.name!r} carries no K-theory data")
    pairs = [
        ("K_0 sub: coinv K^0 <-> coinv H^even", coinvariants(x.k_module(0)),
         _sum_ends(x, 0, coinvariants)),
        ("K_0 quotient: inv K^1 <-> inv H^odd", invariants(x.k_module(1)),
         _sum_ends(x, 1, invariants)),
        ("K_1 sub: coinv K^1 <-> coinv H^odd", coinvariants(x.k_module(1)),
         _sum_ends(x, 1, coinvariants)),
        ("K_1 quotient: inv K^0 <-> inv H^even", invariants(x.k_module(0)),
         _sum_ends(x, 0, invariants)),
    ]
    rows = tuple(_match(lbl, k, h) for lbl, k, h in pairs
                 if not (k.is_trivial() and h.is_trivial()))
    totals = []
    for i in (0, 1):
        k = direct_sum([pairs[2 * i][1], pairs[2 * i + 1][1]])
        h = direct_sum([pairs[2 * i][2], pairs[2 * i + 1][2]])
        if not (k.is_trivial() and h.is_trivial()):
            totals.append(_match(f"K_{i} <-> H_{'ev' if i == 0 else 'od'}", k, h))
    unit_k = pv_ktheory(x).unit_image
    unit_h = None
    if x.unit_h is not None:
        # H^0 leads the even sum, so the unit is padded by zeros like the K-side one
        h_ev = direct_sum([pairs[0][2], pairs[1][2]])
        unit_h = list(x.unit_h) + [0] * (h_ev.ngens - len(x.unit_h))
    return Correspondence(rows, tuple(totals), unit_k, unit_h, rational)


def _match(label, k, h) -> EndMatch:
    return EndMatch(label, k, h, k.free_rank == h.free_rank,
                    k.invariant_factors == h.invariant_factors)
