"""Finite chain complexes of presented groups.

Degrees are integers, differentials lower degree by one, and any degree
without an object is the zero group.  Homology is presented on the cycle
generators, which keeps class representatives at hand for induced maps and
for the snake-lemma boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .abelian import GroupHom, PresentedGroup, kernel, preimage
from .errors import LiftFailure, NotAChainMap, NotAComplex, NotShortExact
from .intmat import IntMatrix

ZERO = PresentedGroup(0)


class ChainComplex:
    def __init__(self, objects: Mapping[int, PresentedGroup],
                 differentials: Mapping[int, GroupHom] | None = None):
        self.objects = {int(n): g for n, g in objects.items() if g.ngens > 0}
        diffs = {}
        for n, d in (differentials or {}).items():
            n = int(n)
            src, tgt = self.obj(n), self.obj(n - 1)
            if d.source.ngens != src.ngens or d.target.ngens != tgt.ngens:
                raise NotAComplex(f"differential in degree {n} has the wrong shape")
            if src.ngens and tgt.ngens:
                diffs[n] = GroupHom(src, tgt, d.matrix)
        self.differentials = diffs
        for n in self.differentials:
            if n - 1 in self.differentials:
                comp = self.differentials[n - 1].compose(self.differentials[n])
                if not comp.is_zero():
                    raise NotAComplex(f"d_{n - 1} ∘ d_{n} is not zero")

    def obj(self, n: int) -> PresentedGroup:
        return self.objects.get(n, ZERO)

    def diff(self, n: int) -> GroupHom:
        d = self.differentials.get(n)
        if d is None:
            return GroupHom.zero(self.obj(n), self.obj(n - 1))
        return d

    def degrees(self) -> list[int]:
        return sorted(self.objects)

    def degree_range(self, pad: int = 0) -> range:
        if not self.objects:
            return range(0)
        return range(min(self.objects) - pad, max(self.objects) + pad + 1)

    def homology(self, n: int) -> PresentedGroup:
        return homology(self, n)

    def __repr__(self):
        body = ", ".join(f"{n}: {self.obj(n)}" for n in self.degrees())
        return f"ChainComplex({{{body}}})"


@dataclass(frozen=True)
class HomologyData:
    """H_n presented on cycle generators.

    ``cycles`` includes Z_n into C_n; the homology group has the cycle
    generators as generators, so a homology element is a vector of cycle
    coefficients.
    """
    group: PresentedGroup
    cycles: GroupHom

    def class_of(self, chain: Sequence[int]) -> list[int]:
        w = preimage(self.cycles, list(chain))
        if w is None:
            raise ValueError("chain is not a cycle")
        return w

    def representative(self, cls: Sequence[int]) -> list[int]:
        return self.cycles(list(cls))


def homology_with_reps(c: ChainComplex, n: int) -> HomologyData:
    zgroup, inc = kernel(c.diff(n))
    d_up = c.diff(n + 1)
    lifts = []
    for col in d_up.matrix.columns():
        w = preimage(inc, col)
        if w is None:
            raise AssertionError("boundary is not a cycle")
        lifts.append(w)
    rel = IntMatrix.hstack([zgroup.relations, IntMatrix.from_columns(lifts, zgroup.ngens)],
                           rows=zgroup.ngens)
    return HomologyData(PresentedGroup(zgroup.ngens, rel), inc)


def homology(c: ChainComplex, n: int) -> PresentedGroup:
    return homology_with_reps(c, n).group


def all_homology(c: ChainComplex) -> dict[int, PresentedGroup]:
    return {n: homology(c, n) for n in c.degree_range(1)}


class ComplexMap:
    def __init__(self, source: ChainComplex, target: ChainComplex,
                 components: Mapping[int, GroupHom]):
        self.source = source
        self.target = target
        comps = {}
        for n, f in components.items():
            n = int(n)
            a, b = source.obj(n), target.obj(n)
            if f.source.ngens != a.ngens or f.target.ngens != b.ngens:
                raise NotAChainMap(f"component in degree {n} has the wrong shape")
            if a.ngens and b.ngens:
                comps[n] = GroupHom(a, b, f.matrix)
        self.components = comps
        degs = set(source.objects) | set(target.objects)
        for n in sorted(degs | {m + 1 for m in degs}):
            lhs = target.diff(n).compose(self.at(n))
            rhs = self.at(n - 1).compose(source.diff(n))
            if not lhs.equals(rhs):
                raise NotAChainMap(f"map does not commute with the differential in degree {n}")

    def at(self, n: int) -> GroupHom:
        f = self.components.get(n)
        if f is None:
            return GroupHom.zero(self.source.obj(n), self.target.obj(n))
        return f

    @classmethod
    def identity(cls, c: ChainComplex) -> "ComplexMap":
        return cls(c, c, {n: GroupHom.identity(c.obj(n)) for n in c.objects})

    @classmethod
    def zero(cls, a: ChainComplex, b: ChainComplex) -> "ComplexMap":
        return cls(a, b, {})

    def __sub__(self, other: "ComplexMap") -> "ComplexMap":
        degs = set(self.components) | set(other.components)
        return ComplexMap(self.source, self.target,
                          {n: self.at(n) - other.at(n) for n in degs})


def induced_map(f: ComplexMap, n: int) -> GroupHom:
    hs = homology_with_reps(f.source, n)
    ht = homology_with_reps(f.target, n)
    cols = []
    for j in range(hs.group.ngens):
        z = hs.cycles.matrix.column(j)
        cols.append(ht.class_of(f.at(n)(z)))
    return GroupHom(hs.group, ht.group, IntMatrix.from_columns(cols, ht.group.ngens))


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """(C[k])_n = C_{n-k} with differential (-1)^k d."""
    sign = -1 if k % 2 else 1
    objs = {n + k: g for n, g in c.objects.items()}
    diffs = {n + k: GroupHom(d.source, d.target, d.matrix.scale(sign), check=False)
             for n, d in c.differentials.items()}
    return ChainComplex(objs, diffs)


def direct_sum_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    from .abelian import direct_sum, hom_direct_sum
    degs = set(a.objects) | set(b.objects)
    objs = {n: direct_sum([a.obj(n), b.obj(n)]) for n in degs}
    diffs = {n: hom_direct_sum([a.diff(n), b.diff(n)]) for n in degs}
    return ChainComplex(objs, diffs)


@dataclass(frozen=True)
class Cone:
    """Mapping cone of f: C -> D with its short exact sequence D -> cone -> C[1]."""
    complex: ChainComplex
    inclusion: ComplexMap
    projection: ComplexMap


def mapping_cone(f: ComplexMap) -> ChainComplex:
    return mapping_cone_ses(f).complex


def mapping_cone_ses(f: ComplexMap) -> Cone:
    from .abelian import direct_sum
    c, d = f.source, f.target
    degs = set(d.objects) | {n + 1 for n in c.objects}
    objs = {n: direct_sum([d.obj(n), c.obj(n - 1)]) for n in degs}
    diffs = {}
    for n in degs:
        if n - 1 not in degs:
            continue
        top = IntMatrix.hstack([d.diff(n).matrix, f.at(n - 1).matrix], rows=d.obj(n - 1).ngens)
        bot = IntMatrix.hstack([IntMatrix.zeros(c.obj(n - 2).ngens, d.obj(n).ngens),
                                -c.diff(n - 1).matrix], rows=c.obj(n - 2).ngens)
        m = IntMatrix.vstack([top, bot], cols=objs[n].ngens)
        diffs[n] = GroupHom(objs[n], objs[n - 1], m, check=False)
    cone = ChainComplex(objs, diffs)
    sh = shift(c, 1)
    inc, proj = {}, {}
    for n in degs:
        dn, cn = d.obj(n).ngens, c.obj(n - 1).ngens
        inc[n] = GroupHom(d.obj(n), cone.obj(n),
                          IntMatrix.vstack([IntMatrix.identity(dn), IntMatrix.zeros(cn, dn)],
                                           cols=dn), check=False)
        proj[n] = GroupHom(cone.obj(n), sh.obj(n),
                           IntMatrix.hstack([IntMatrix.zeros(cn, dn), IntMatrix.identity(cn)],
                                            rows=cn), check=False)
    return Cone(cone, ComplexMap(d, cone, inc), ComplexMap(cone, sh, proj))


@dataclass(frozen=True)
class Exactness:
    ok: bool
    node: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_exact(seq: Sequence[GroupHom]) -> Exactness:
    """Check im = ker at every interior node of a composable sequence.

    Node ``k`` sits between ``seq[k]`` and ``seq[k + 1]``.
    """
    for k in range(len(seq) - 1):
        f, g = seq[k], seq[k + 1]
        if f.target.ngens != g.source.ngens:
            raise ValueError(f"maps {k} and {k + 1} are not composable")
        if not g.compose(f).is_zero():
            return Exactness(False, k, "composite is not zero")
        _, inc = kernel(g)
        for col in inc.matrix.columns():
            if preimage(f, col) is None:
                return Exactness(False, k, "kernel is larger than the image")
    return Exactness(True)


@dataclass
class ShortExactSequence:
    """0 -> A -> B -> C -> 0 degreewise, given by two complex maps."""
    inclusion: ComplexMap
    projection: ComplexMap
    degrees: list = field(default_factory=list)

    def __post_init__(self):
        a = self.inclusion.source
        b = self.inclusion.target
        c = self.projection.target
        if self.projection.source is not b:
            if set(self.projection.source.objects) != set(b.objects):
                raise NotShortExact("the two maps do not share a middle complex")
        degs = sorted(set(a.objects) | set(b.objects) | set(c.objects))
        self.degrees = degs
        for n in degs:
            zin = GroupHom.zero(ZERO, a.obj(n))
            zout = GroupHom.zero(c.obj(n), ZERO)
            res = verify_exact([zin, self.inclusion.at(n), self.projection.at(n), zout])
            if not res:
                raise NotShortExact(f"not short exact in degree {n}: {res.reason}")

    @property
    def sub(self) -> ChainComplex:
        return self.inclusion.source

    @property
    def middle(self) -> ChainComplex:
        return self.inclusion.target

    @property
    def quotient(self) -> ChainComplex:
        return self.projection.target


def connecting_map(ses: ShortExactSequence, n: int) -> GroupHom:
    """Snake boundary H_n(quotient) -> H_{n-1}(sub), built by lifting."""
    hq = homology_with_reps(ses.quotient, n)
    ha = homology_with_reps(ses.sub, n - 1)
    p, i = ses.projection.at(n), ses.inclusion.at(n - 1)
    d = ses.middle.diff(n)
    cols = []
    for j in range(hq.group.ngens):
        z = hq.cycles.matrix.column(j)
        b = preimage(p, z)
        if b is None:
            raise LiftFailure(f"cycle {j} in degree {n} has no lift to the middle complex")
        a = preimage(i, d(b))
        if a is None:
            raise LiftFailure(f"boundary of the lift of cycle {j} is not in the subcomplex")
        w = preimage(ha.cycles, a)
        if w is None:
            raise LiftFailure(f"pulled back element in degree {n - 1} is not a cycle")
        cols.append(w)
    return GroupHom(hq.group, ha.group, IntMatrix.from_columns(cols, ha.group.ngens))


@dataclass(frozen=True)
class LongExactSequence:
    maps: list
    labels: list

    def verify(self) -> Exactness:
        return verify_exact(self.maps)


def long_exact_sequence(ses: ShortExactSequence) -> LongExactSequence:
    """... -> H_n(A) -> H_n(B) -> H_n(C) -> H_{n-1}(A) -> ..., top degree first."""
    degs = ses.degrees
    if not degs:
        return LongExactSequence([], [])
    maps, labels = [], []
    for n in range(max(degs) + 1, min(degs) - 2, -1):
        maps.append(induced_map(ses.inclusion, n))
        labels.append(f"H_{n}(sub) -> H_{n}(middle)")
        maps.append(induced_map(ses.projection, n))
        labels.append(f"H_{n}(middle) -> H_{n}(quotient)")
        maps.append(connecting_map(ses, n))
        labels.append(f"H_{n}(quotient) -> H_{n - 1}(sub)")
    return LongExactSequence(maps, labels)


def euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** (n % 2) * g.free_rank for n, g in c.objects.items())


def homology_euler_characteristic(c: ChainComplex) -> int:
    return sum((-1) ** (n % 2) * homology(c, n).free_rank for n in c.degrees())
