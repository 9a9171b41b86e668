"""Z-modules, invariants and coinvariants, and homology of Z ⋉ X.

Two routes to the homology of a Z-action are provided:

* ``hyperhomology_z`` works at chain level: the homology of the mapping
  cone of ``id - α`` on a complex carrying the action.  It is exact.
* ``groupoid_homology_from_cohomology`` works from cohomology alone.  Each
  H_n is squeezed between coinv(H^{-n}) and inv(H^{1-n}); when that extension
  cannot be resolved from the data the entry is marked ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .abelian import (GroupHom, PresentedGroup, cokernel, direct_sum, format_canonical,
                      preimage, kernel)
from .complexes import ChainComplex, ComplexMap, homology, induced_map, mapping_cone
from .errors import AmbiguousExtension, HKError, ModelError, NonCommuting, NotAnAutomorphism
from .intmat import IntMatrix


class ZModule:
    """A presented group with an automorphism ``alpha``."""

    __slots__ = ("group", "alpha", "inverse")

    def __init__(self, group: PresentedGroup, alpha=None):
        if alpha is None:
            alpha = GroupHom.identity(group)
        elif not isinstance(alpha, GroupHom):
            alpha = GroupHom(group, group, alpha)
        if alpha.source.ngens != group.ngens or alpha.target.ngens != group.ngens:
            raise NotAnAutomorphism("action matrix has the wrong size")
        alpha = GroupHom(group, group, alpha.matrix)
        cols = []
        for j in range(group.ngens):
            e = [int(i == j) for i in range(group.ngens)]
            w = preimage(alpha, e)
            if w is None:
                raise NotAnAutomorphism(f"generator {j} is not in the image of the action", j)
            cols.append(w)
        # a surjective endomorphism of a finitely generated abelian group is bijective
        self.group = group
        self.alpha = alpha
        self.inverse = GroupHom(group, group, IntMatrix.from_columns(cols, group.ngens))

    @classmethod
    def trivial(cls, group: PresentedGroup) -> "ZModule":
        return cls(group)

    def delta(self) -> GroupHom:
        return GroupHom.identity(self.group) - self.alpha

    def is_trivial_action(self) -> bool:
        return self.alpha.equals(GroupHom.identity(self.group))

    def __repr__(self):
        return f"ZModule({self.group}, alpha={self.alpha.matrix.tolist()})"


@dataclass(frozen=True)
class PresentedEnds:
    """Module known only through its coinvariants and invariants.

    Used where the module itself is not finitely generated (locally constant
    integer functions on a Cantor set) but both ends are.
    """
    coinvariants: PresentedGroup
    invariants: PresentedGroup


ModuleLike = Union[ZModule, PresentedEnds]


def invariants_with_map(m: ZModule) -> tuple[PresentedGroup, GroupHom]:
    return kernel(m.delta())


def coinvariants_with_map(m: ZModule) -> tuple[PresentedGroup, GroupHom]:
    return cokernel(m.delta())


def invariants(m: ModuleLike) -> PresentedGroup:
    if isinstance(m, PresentedEnds):
        return m.invariants
    return invariants_with_map(m)[0]


def coinvariants(m: ModuleLike) -> PresentedGroup:
    if isinstance(m, PresentedEnds):
        return m.coinvariants
    return coinvariants_with_map(m)[0]


def is_trivial_action(m: ModuleLike) -> bool:
    return isinstance(m, ZModule) and m.is_trivial_action()


# --------------------------------------------------------------------------
# graded results with possible extension ambiguity
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Resolved:
    group: PresentedGroup
    sub: PresentedGroup | None = None
    quotient: PresentedGroup | None = None

    def canonical(self):
        return self.group.canonical()


@dataclass(frozen=True)
class Ambiguous:
    sub: PresentedGroup
    quotient: PresentedGroup

    def canonical(self):
        raise AmbiguousExtension("extension of "
                                 f"{self.quotient} by {self.sub} is not determined")


Entry = Union[Resolved, Ambiguous]
_ZERO = Resolved(PresentedGroup(0))


def split_entry(sub: PresentedGroup, quotient: PresentedGroup, trivial: bool = False) -> Entry:
    """Resolve ``0 -> sub -> ? -> quotient -> 0`` when the data force the answer.

    ``trivial`` records that the action is the identity in every degree, in
    which case the extension splits.
    """
    if quotient.is_free() or sub.is_trivial() or trivial:
        return Resolved(direct_sum([sub, quotient]), sub, quotient)
    return Ambiguous(sub, quotient)


@dataclass(frozen=True)
class GradedInvariant:
    entries: Mapping[int, Entry] = field(default_factory=dict)

    def at(self, n: int) -> Entry:
        return self.entries.get(n, _ZERO)

    def group(self, n: int) -> PresentedGroup:
        e = self.at(n)
        if isinstance(e, Ambiguous):
            e.canonical()
        return e.group

    def degrees(self) -> list[int]:
        return sorted(self.entries, reverse=True)

    def is_resolved(self) -> bool:
        return all(isinstance(e, Resolved) for e in self.entries.values())

    def profile(self) -> dict:
        """Nonzero degrees mapped to canonical forms (or an ambiguity marker)."""
        out = {}
        for n in self.degrees():
            e = self.entries[n]
            if isinstance(e, Ambiguous):
                out[n] = ("ambiguous", e.sub.canonical(), e.quotient.canonical())
            elif not e.group.is_trivial():
                out[n] = e.group.canonical()
        return out

    def rank(self, n: int) -> int:
        e = self.at(n)
        if isinstance(e, Ambiguous):
            return e.sub.free_rank + e.quotient.free_rank
        return e.group.free_rank

    def format(self, symbol: str = "H", lower: bool = True) -> list[str]:
        lines = []
        for n in self.degrees():
            e = self.entries[n]
            idx = f"_{n}" if lower else f"^{n}"
            if isinstance(e, Ambiguous):
                lines.append(f"{symbol}{idx}: extension of {e.quotient} by {e.sub}")
            elif not e.group.is_trivial():
                lines.append(f"{symbol}{idx} ≅ {e.group}")
        return lines


def z2_grade(g: GradedInvariant) -> tuple[PresentedGroup, PresentedGroup]:
    """Sum even and odd degrees; degree 0 (resp. 1) comes first, then descending."""
    even, odd = [], []
    for n in g.degrees():
        e = g.entries[n]
        if isinstance(e, Ambiguous):
            raise AmbiguousExtension(f"degree {n} is only known up to extension")
        (even if n % 2 == 0 else odd).append(e.group)
    return direct_sum(even), direct_sum(odd)


def z2_offsets(g: GradedInvariant) -> dict[int, int]:
    """Generator offset of each degree inside the graded sums of ``z2_grade``."""
    offs, pos = {}, {0: 0, 1: 0}
    for n in g.degrees():
        e = g.entries[n]
        offs[n] = pos[n % 2]
        pos[n % 2] += e.group.ngens if isinstance(e, Resolved) else 0
    return offs


# --------------------------------------------------------------------------
# chain-level route
# --------------------------------------------------------------------------


def _check_commuting(c: ChainComplex, alphas: Mapping[int, GroupHom]):
    def at(n):
        a = alphas.get(n)
        return a if a is not None else GroupHom.zero(c.obj(n), c.obj(n))
    for n in sorted(set(c.objects) | {m + 1 for m in c.objects}):
        if not c.diff(n).compose(at(n)).equals(at(n - 1).compose(c.diff(n))):
            raise NonCommuting(f"action does not commute with d_{n}", n)


def _alpha_map(c: ChainComplex, alphas) -> dict[int, GroupHom]:
    out = {}
    for n in c.objects:
        a = alphas.get(n)
        if a is None:
            raise NonCommuting(f"no automorphism given in degree {n}", n)
        if isinstance(a, ZModule):
            a = a.alpha
        elif not isinstance(a, GroupHom):
            a = GroupHom(c.obj(n), c.obj(n), a)
        out[n] = a
    return out


def hyperhomology_z(c: ChainComplex, alphas: Mapping[int, object]) -> GradedInvariant:
    """Exact Z-graded homology of Z with coefficients in ``c``."""
    al = _alpha_map(c, alphas)
    _check_commuting(c, al)
    delta = ComplexMap(c, c, {n: GroupHom.identity(c.obj(n)) - al[n] for n in c.objects})
    cone = mapping_cone(delta)
    out = {}
    for n in cone.degree_range(1):
        h = homology(cone, n)
        if not h.is_trivial():
            out[n] = Resolved(h)
    return GradedInvariant(out)


def cohomology_from_chain(c: ChainComplex, alphas: Mapping[int, object]) -> dict[int, ZModule]:
    """H^q with its induced action, reading a complex in homological degree -q."""
    al = _alpha_map(c, alphas)
    _check_commuting(c, al)
    out = {}
    for n in c.degree_range(1):
        h = homology(c, n)
        if h.is_trivial():
            continue
        src = ComplexMap(c, c, al)
        out[-n] = ZModule(h, induced_map(src, n))
    return out


# --------------------------------------------------------------------------
# space models
# --------------------------------------------------------------------------


@dataclass
class SpaceTrace:
    """Per-generator trace values of one invariant measure.

    ``h0``/``h1`` are indexed by the generators of H^0 and H^1, ``k0``/``k1``
    by those of K^0 and K^1.  Values are RealExprs.  Missing lists mean zero.
    """
    name: str
    h0: list = field(default_factory=list)
    h1: list = field(default_factory=list)
    k0: list = field(default_factory=list)
    k1: list = field(default_factory=list)


FLAG_NAMES = ("connected", "dimension", "cup_trivial", "chern_integral", "chern_class_iso",
              "product_of_spheres", "suspension")


@dataclass
class SpaceModel:
    name: str
    cohomology: dict
    ktheory: tuple | None = None
    unit_h: list | None = None
    unit_k: list | None = None
    traces: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    simplex: object = None

    def __post_init__(self):
        self.cohomology = {int(q): m for q, m in self.cohomology.items()}
        for key in self.flags:
            if key not in FLAG_NAMES:
                raise ModelError(f"unknown flag {key!r} on model {self.name!r}")
        for q, m in self.cohomology.items():
            if q < 0:
                raise ModelError(f"negative cohomology degree {q} on model {self.name!r}")
            if not isinstance(m, (ZModule, PresentedEnds)):
                raise ModelError(f"cohomology degree {q} of {self.name!r} is not a module")
        if self.flags.get("connected"):
            h0 = self.cohomology.get(0)
            if not isinstance(h0, ZModule) or h0.group.canonical() != (1, ()) \
                    or not h0.is_trivial_action():
                raise ModelError(f"{self.name!r} is declared connected but H^0 is not Z "
                                 "with trivial action")
        if self.unit_h is not None:
            self._unit_check(self.h_module(0), self.unit_h, "H^0")
        if self.ktheory is not None:
            if len(self.ktheory) != 2:
                raise ModelError("K-theory must be a pair (K^0, K^1)")
            if self.unit_k is not None:
                self._unit_check(self.ktheory[0], self.unit_k, "K^0")

    def _unit_check(self, m, unit, label):
        n = m.group.ngens if isinstance(m, ZModule) else m.coinvariants.ngens
        if len(unit) != n:
            raise ModelError(f"unit of {self.name!r} has {len(unit)} coordinates, {label} "
                             f"has {n} generators")

    def h_module(self, q: int) -> ModuleLike:
        m = self.cohomology.get(q)
        if m is None:
            return ZModule(PresentedGroup(0))
        return m

    def k_module(self, i: int) -> ModuleLike:
        if self.ktheory is None:
            raise HKError(f"model {self.name!r} carries no K-theory data")
        return self.ktheory[i % 2]

    def trivial_action(self) -> bool:
        mods = list(self.cohomology.values())
        return all(is_trivial_action(m) for m in mods)

    def k_trivial_action(self) -> bool:
        return self.ktheory is not None and all(is_trivial_action(m) for m in self.ktheory)

    def top_degree(self) -> int:
        nz = [q for q, m in self.cohomology.items() if not _is_zero_module(m)]
        return max(nz) if nz else -1


def _is_zero_module(m: ModuleLike) -> bool:
    if isinstance(m, PresentedEnds):
        return m.coinvariants.is_trivial() and m.invariants.is_trivial()
    return m.group.is_trivial()


def module_group(m: ModuleLike) -> PresentedGroup:
    """Underlying group; for ends-only data this is the coinvariant group."""
    return m.group if isinstance(m, ZModule) else m.coinvariants


def ends_graded(mods: Mapping[int, ModuleLike], sub_deg, quot_deg, degrees,
                trivial: bool) -> GradedInvariant:
    out = {}
    for n in degrees:
        sub_m, quot_m = mods.get(sub_deg(n)), mods.get(quot_deg(n))
        sub = coinvariants(sub_m) if sub_m is not None else PresentedGroup(0)
        quot = invariants(quot_m) if quot_m is not None else PresentedGroup(0)
        if sub.is_trivial() and quot.is_trivial():
            continue
        out[n] = split_entry(sub, quot, trivial)
    return GradedInvariant(out)


def groupoid_homology_from_cohomology(x: SpaceModel) -> GradedInvariant:
    """0 -> coinv(H^{-n}) -> H_n -> inv(H^{1-n}) -> 0, with H_n = 0 above degree 1."""
    qs = [q for q, m in x.cohomology.items() if not _is_zero_module(m)]
    degrees = sorted({-q for q in qs} | {1 - q for q in qs}, reverse=True)
    return ends_graded(x.cohomology, lambda n: -n, lambda n: 1 - n, degrees,
                       x.trivial_action())
