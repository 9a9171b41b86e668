"""Finitely generated abelian groups given by generators and relations.

A group on ``n`` generators is the quotient of Z^n by the lattice spanned
by the columns of its relation matrix.  Elements are plain integer vectors
of length ``n``; two vectors are the same element when their difference lies
in the relation lattice.

The canonical form (free rank, invariant factors) is computed once at
construction, from the Smith normal form of the relations, so a group value
never changes after it is built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidHomomorphism
from .intmat import (IntMatrix, as_matrix, diagonal_of, integer_kernel, lattice_basis,
                     smith_with_inverse, solve_integer)

Element = list


class PresentedGroup:
    """Z^n modulo the column span of ``relations``."""

    __slots__ = ("ngens", "relations", "free_rank", "invariant_factors",
                 "_u", "_uinv", "_diag")

    def __init__(self, ngens: int, relations=None):
        if ngens < 0:
            raise ValueError("generator count must be non-negative")
        if relations is None:
            relations = IntMatrix.zeros(ngens, 0)
        elif not isinstance(relations, IntMatrix):
            cols = [list(c) for c in relations]
            relations = IntMatrix.from_columns(cols, ngens)
        if relations.rows != ngens:
            raise ValueError(f"relation matrix has {relations.rows} rows for {ngens} generators")
        self.ngens = ngens
        self.relations = relations
        u, d, _, ui = smith_with_inverse(relations)
        diag = diagonal_of(d) + [0] * max(0, ngens - min(d.rows, d.cols))
        diag = diag[:ngens]
        self._u = u
        self._uinv = ui
        self._diag = tuple(diag)
        self.invariant_factors = tuple(x for x in diag if x > 1)
        self.free_rank = sum(1 for x in diag if x == 0)

    # constructors ---------------------------------------------------------

    @classmethod
    def free(cls, rank: int) -> "PresentedGroup":
        return cls(rank)

    @classmethod
    def zero(cls) -> "PresentedGroup":
        return cls(0)

    @classmethod
    def from_invariants(cls, free_rank: int, factors: Sequence[int] = ()) -> "PresentedGroup":
        """Standard presentation: torsion generators first, then free ones."""
        factors = [int(f) for f in factors]
        n = len(factors) + free_rank
        return cls(n, IntMatrix.diagonal(factors, n, len(factors)))

    @classmethod
    def cyclic(cls, order: int) -> "PresentedGroup":
        if order == 0:
            return cls(1)
        return cls(1, IntMatrix([[order]]))

    # canonical data ---------------------------------------------------------

    def canonical(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.invariant_factors)

    def kept_indices(self) -> list[int]:
        """Smith coordinates that survive (factor 1 coordinates are dropped)."""
        tors = [i for i, x in enumerate(self._diag) if x > 1]
        free = [i for i, x in enumerate(self._diag) if x == 0]
        return tors + free

    def canonical_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of ``x`` against the standard generators.

        Torsion coordinates are reduced into ``[0, d)``; two elements are equal
        exactly when their canonical coordinates are.
        """
        self._check_element(x)
        y = self._u.apply(list(x))
        out = []
        for i in self.kept_indices():
            d = self._diag[i]
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def from_canonical(self, coords: Sequence[int]) -> list[int]:
        idx = self.kept_indices()
        if len(coords) != len(idx):
            raise ValueError(f"expected {len(idx)} canonical coordinates")
        x = [0] * self.ngens
        for c, i in zip(coords, idx):
            if c:
                col = self._uinv.column(i)
                x = [a + c * b for a, b in zip(x, col)]
        return x

    def standard_generators(self) -> list[list[int]]:
        return [self._uinv.column(i) for i in self.kept_indices()]

    def standard_orders(self) -> list[int]:
        """Order of each standard generator (0 for infinite order)."""
        return [self._diag[i] for i in self.kept_indices()]

    # element helpers --------------------------------------------------------

    def _check_element(self, x):
        if len(x) != self.ngens:
            raise ValueError(f"element of length {len(x)} in a group on {self.ngens} generators")

    def zero_element(self) -> list[int]:
        return [0] * self.ngens

    def is_zero_element(self, x: Sequence[int]) -> bool:
        return all(c == 0 for c in self.canonical_coords(x))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.canonical_coords(x) == self.canonical_coords(y)

    def element_order(self, x: Sequence[int]) -> int:
        """Order of ``x`` (0 when infinite)."""
        from math import gcd
        order = 1
        for c, d in zip(self.canonical_coords(x), self.standard_orders()):
            if d == 0:
                if c:
                    return 0
            elif c:
                k = d // gcd(c, d)
                order = order * k // gcd(order, k)
        return order

    # predicates ----------------------------------------------------------

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_free(self) -> bool:
        return not self.invariant_factors

    def torsion_order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def rank(self) -> int:
        return self.free_rank

    def __eq__(self, other):
        # presentations, not isomorphism classes
        if not isinstance(other, PresentedGroup):
            return NotImplemented
        return self.ngens == other.ngens and self.relations == other.relations

    def __hash__(self):
        return hash((self.ngens, self.relations))

    def __repr__(self):
        return f"PresentedGroup({self.ngens}, relations={self.relations.tolist()})"

    def __str__(self):
        return format_group(self)


def format_canonical(free_rank: int, factors: Sequence[int]) -> str:
    parts = []
    if free_rank == 1:
        parts.append("ℤ")
    elif free_rank > 1:
        parts.append(f"ℤ^{free_rank}")
    # group repeated factors as (ℤ/d)^k
    i = 0
    factors = list(factors)
    while i < len(factors):
        j = i
        while j < len(factors) and factors[j] == factors[i]:
            j += 1
        k = j - i
        parts.append(f"ℤ/{factors[i]}" if k == 1 else f"(ℤ/{factors[i]})^{k}")
        i = j
    return " ⊕ ".join(parts) if parts else "0"


def format_group(g: PresentedGroup) -> str:
    return format_canonical(g.free_rank, g.invariant_factors)


def canonicalize(g: PresentedGroup) -> tuple[int, list[int]]:
    return g.free_rank, list(g.invariant_factors)


def is_isomorphic(a: PresentedGroup, b: PresentedGroup) -> bool:
    return a.canonical() == b.canonical()


def in_lattice(rel: IntMatrix, v: Sequence[int]) -> bool:
    if rel.cols == 0:
        return all(x == 0 for x in v)
    return solve_integer(rel, list(v)) is not None


class GroupHom:
    """Homomorphism given by an integer matrix on generators.

    Construction checks that every source relation lands in the target
    relation lattice and raises :class:`InvalidHomomorphism` otherwise.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: PresentedGroup, target: PresentedGroup, matrix, check: bool = True):
        matrix = as_matrix(matrix, target.ngens, source.ngens)
        if matrix.shape != (target.ngens, source.ngens):
            raise InvalidHomomorphism(
                f"matrix shape {matrix.shape} does not match {target.ngens}x{source.ngens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            images = matrix @ source.relations
            for j in range(images.cols):
                if not in_lattice(target.relations, images.column(j)):
                    raise InvalidHomomorphism(
                        f"source relation {j} does not map into the target relations", j)

    @classmethod
    def identity(cls, g: PresentedGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.ngens), check=False)

    @classmethod
    def zero(cls, a: PresentedGroup, b: PresentedGroup) -> "GroupHom":
        return cls(a, b, IntMatrix.zeros(b.ngens, a.ngens), check=False)

    def __call__(self, x: Sequence[int]) -> list[int]:
        self.source._check_element(x)
        return self.matrix.apply(list(x))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self ∘ inner``."""
        if inner.target.ngens != self.source.ngens:
            raise ValueError("homomorphisms are not composable")
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix, check=False)

    def __matmul__(self, inner: "GroupHom") -> "GroupHom":
        return self.compose(inner)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.source, self.target, -self.matrix, check=False)

    def is_zero(self) -> bool:
        return all(in_lattice(self.target.relations, c) for c in self.matrix.columns())

    def equals(self, other: "GroupHom") -> bool:
        return (self - other).is_zero()

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r}, {self.matrix.tolist()})"


def kernel(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    a, b, m = h.source, h.target, h.matrix
    n = a.ngens
    big = IntMatrix.hstack([m, -b.relations], rows=b.ngens)
    ker = integer_kernel(big)
    gens = ker.submatrix(range(n), range(ker.cols))
    basis = lattice_basis(gens) if gens.cols else IntMatrix.zeros(n, 0)
    r = basis.cols
    # source relations lie in the kernel lattice; rewrite them in the basis
    cols = []
    for j in range(a.relations.cols):
        w = solve_integer(basis, a.relations.column(j)) if r else []
        if w is None:
            raise AssertionError("source relation outside the kernel lattice")
        cols.append(w)
    kgroup = PresentedGroup(r, IntMatrix.from_columns(cols, r))
    return kgroup, GroupHom(kgroup, a, basis, check=False)


def cokernel(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    b = h.target
    rel = IntMatrix.hstack([b.relations, h.matrix], rows=b.ngens)
    cgroup = PresentedGroup(b.ngens, rel)
    return cgroup, GroupHom(b, cgroup, IntMatrix.identity(b.ngens), check=False)


def image(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    """Image as a quotient of the source, with its inclusion into the target."""
    kgroup, inc = kernel(h)
    a = h.source
    rel = IntMatrix.hstack([a.relations, inc.matrix], rows=a.ngens)
    img = PresentedGroup(a.ngens, rel)
    return img, GroupHom(img, h.target, h.matrix, check=False)


def preimage(h: GroupHom, y: Sequence[int]) -> list[int] | None:
    """Some ``x`` with ``h(x) == y`` in the target, or None if ``y`` is not in the image."""
    b = h.target
    b._check_element(y)
    big = IntMatrix.hstack([h.matrix, b.relations], rows=b.ngens)
    if big.cols == 0:
        return [] if all(v == 0 for v in y) else None
    sol = solve_integer(big, list(y))
    if sol is None:
        return None
    return sol[:h.source.ngens]


def direct_sum(groups: Sequence[PresentedGroup]) -> PresentedGroup:
    n = sum(g.ngens for g in groups)
    rel = IntMatrix.block_diag([g.relations for g in groups]) if groups else IntMatrix.zeros(0, 0)
    return PresentedGroup(n, rel)


def hom_direct_sum(homs: Sequence[GroupHom]) -> GroupHom:
    src = direct_sum([h.source for h in homs])
    tgt = direct_sum([h.target for h in homs])
    return GroupHom(src, tgt, IntMatrix.block_diag([h.matrix for h in homs]), check=False)


def inclusion_into_sum(groups: Sequence[PresentedGroup], k: int) -> GroupHom:
    total = direct_sum(groups)
    off = sum(g.ngens for g in groups[:k])
    m = [[int(i == off + j) for j in range(groups[k].ngens)] for i in range(total.ngens)]
    return GroupHom(groups[k], total, IntMatrix(m, total.ngens, groups[k].ngens), check=False)


def projection_from_sum(groups: Sequence[PresentedGroup], k: int) -> GroupHom:
    total = direct_sum(groups)
    off = sum(g.ngens for g in groups[:k])
    m = [[int(j == off + i) for j in range(total.ngens)] for i in range(groups[k].ngens)]
    return GroupHom(total, groups[k], IntMatrix(m, groups[k].ngens, total.ngens), check=False)


@dataclass(frozen=True)
class Simplified:
    """A group in standard form together with inverse isomorphisms to the original."""
    group: PresentedGroup
    to_standard: GroupHom
    from_standard: GroupHom


def simplify(g: PresentedGroup) -> Simplified:
    std = PresentedGroup.from_invariants(g.free_rank, g.invariant_factors)
    idx = g.kept_indices()
    rows = [list(g._u.data[i]) for i in idx]
    to_std = GroupHom(g, std, IntMatrix(rows, len(idx), g.ngens), check=False)
    back = GroupHom(std, g, IntMatrix.from_columns(g.standard_generators(), g.ngens), check=False)
    return Simplified(std, to_std, back)
