import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hkgood.abelian import (GroupHom, PresentedGroup, canonicalize, cokernel, direct_sum,
                            is_isomorphic, kernel, preimage)
from hkgood.errors import InvalidHomomorphism
from hkgood.intmat import IntMatrix, smith_normal_form

from builders import (assert_snf_sound, canonical_from_minors, diag,
                      minors_invariant_factors, random_unimodular)

B = [[1, 1], [-1, 2]]
A = [[0, -1], [1, -1]]


# smith normal form ---------------------------------------------------------

def test_snf_wedge_matrix():
    u, d, v = smith_normal_form(IntMatrix(B))
    assert diag(d) == [1, 3]
    assert u @ IntMatrix(B) @ v == d


def test_snf_identity():
    i3 = IntMatrix.identity(3)
    u, d, v = smith_normal_form(i3)
    assert d == i3
    assert u @ i3 @ v == i3


def test_snf_2468_against_minors():
    m = IntMatrix([[2, 4], [6, 8]])
    assert diag(smith_normal_form(m)[1]) == [2, 4]
    # gcd of entries is 2 and |det| = 8
    assert minors_invariant_factors(m) == [2, 4]


def test_snf_big_entries_exact():
    big = 10 ** 40
    m = IntMatrix([[big, 0], [0, big * 3 + 1]])
    dd = assert_snf_sound(m)
    assert dd[0] * dd[1] == big * (3 * big + 1)


def test_snf_empty_shapes():
    for r, c in ((0, 0), (0, 3), (3, 0)):
        assert_snf_sound(IntMatrix.zeros(r, c))


matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(st.lists(st.integers(-50, 50), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_sound_random(rows):
    assert_snf_sound(IntMatrix(rows))


small = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=100, deadline=None)
@given(small)
def test_snf_diagonal_matches_minor_gcds(rows):
    m = IntMatrix(rows)
    dd = [x for x in diag(smith_normal_form(m)[1]) if x]
    assert dd == minors_invariant_factors(m)


# canonical forms -----------------------------------------------------------

def test_canonicalize_wedge_cokernel():
    assert canonicalize(PresentedGroup(2, [[1, -1], [1, 2]])) == (0, [3])


def test_canonicalize_free():
    assert canonicalize(PresentedGroup(2)) == (2, [])


def test_canonicalize_diagonal_relations():
    g = PresentedGroup(3, [[2, 0, 0], [0, 6, 0]])
    assert canonicalize(g) == (1, [2, 6])
    assert canonical_from_minors(3, g.relations) == (1, (2, 6))


def test_canonicalize_idempotent():
    g = PresentedGroup(3, [[4, 6, 0], [2, 2, 0]])
    f, t = canonicalize(g)
    again = PresentedGroup.from_invariants(f, t)
    assert canonicalize(again) == (f, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 4), st.integers(0, 3))
def test_canonical_invariant_under_basis_change_and_redundant_generators(seed, n, r):
    rng = random.Random(seed)
    rel = IntMatrix([[rng.randint(-6, 6) for _ in range(r)] for _ in range(n)], n, r)
    g = PresentedGroup(n, rel)
    p, _ = random_unimodular(rng, n)
    q, _ = random_unimodular(rng, r)
    assert PresentedGroup(n, p @ rel @ q).canonical() == g.canonical()
    # a new generator e with relation e = Σ c_i x_i
    coeffs = [rng.randint(-3, 3) for _ in range(n)]
    extra = [list(col) + [0] for col in rel.columns()] + [coeffs + [-1]]
    bigger = PresentedGroup(n + 1, IntMatrix.from_columns(extra, n + 1))
    assert bigger.canonical() == g.canonical()
    assert g.canonical() == canonical_from_minors(n, rel)


# kernels and cokernels -----------------------------------------------------

def test_kernel_cokernel_of_id_minus_a():
    z2 = PresentedGroup.free(2)
    h = GroupHom(z2, z2, [[1, 1], [-1, 2]])
    k, inc = kernel(h)
    c, proj = cokernel(h)
    assert k.is_trivial()
    assert c.canonical() == (0, (3,))


def test_kernel_cokernel_of_zero():
    z = PresentedGroup.free(1)
    h = GroupHom.zero(z, z)
    assert kernel(h)[0].canonical() == (1, ())
    assert cokernel(h)[0].canonical() == (1, ())


def test_kernel_cokernel_of_doubling():
    z = PresentedGroup.free(1)
    h = GroupHom(z, z, [[2]])
    assert kernel(h)[0].is_trivial()
    assert cokernel(h)[0].canonical() == (0, (2,))


def random_hom(rng):
    a = PresentedGroup(rng.randint(0, 3), None)
    tgt_n = rng.randint(0, 3)
    rel = [[rng.randint(-4, 4) for _ in range(tgt_n)] for _ in range(rng.randint(0, 2))]
    b = PresentedGroup(tgt_n, IntMatrix.from_columns(rel, tgt_n))
    m = IntMatrix([[rng.randint(-5, 5) for _ in range(a.ngens)] for _ in range(tgt_n)],
                  tgt_n, a.ngens)
    return GroupHom(a, b, m)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_kernel_cokernel_exactness(seed):
    h = random_hom(random.Random(seed))
    k, inc = kernel(h)
    c, proj = cokernel(h)
    assert h.compose(inc).is_zero()
    assert proj.compose(h).is_zero()
    assert inc.is_injective() and proj.is_surjective()
    # rank(source) = rank ker + rank im; rank im = rank target - rank coker
    assert h.source.free_rank == k.free_rank + (h.target.free_rank - c.free_rank)
    # everything killed by h lies in the kernel
    for j in range(h.source.ngens):
        e = [int(i == j) for i in range(h.source.ngens)]
        if h.target.is_zero_element(h(e)):
            assert preimage(inc, e) is not None


# preimages -----------------------------------------------------------------

def test_preimage_doubling():
    z = PresentedGroup.free(1)
    h = GroupHom(z, z, [[2]])
    assert preimage(h, [4]) == [2]
    assert preimage(h, [3]) is None


def test_preimage_wedge_matrix():
    z2 = PresentedGroup.free(2)
    h = GroupHom(z2, z2, B)
    x = preimage(h, [1, 2])
    assert h(x) == [1, 2]
    assert x == [int(t) for t in sympy.Matrix(B).solve(sympy.Matrix([1, 2]))]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_preimage_soundness(seed):
    rng = random.Random(seed)
    h = random_hom(rng)
    y = [rng.randint(-6, 6) for _ in range(h.target.ngens)]
    x = preimage(h, y)
    if x is not None:
        assert h.target.equal(h(x), y)
    src = [rng.randint(-3, 3) for _ in range(h.source.ngens)]
    assert preimage(h, h(src)) is not None


# isomorphism ---------------------------------------------------------------

def test_isomorphic_distinct_factors():
    a = PresentedGroup.from_invariants(1, [2, 4])
    b = PresentedGroup.from_invariants(1, [8])
    assert not is_isomorphic(a, b)


def test_isomorphic_presentation():
    a = PresentedGroup(2, [[0, 3]])
    b = direct_sum([PresentedGroup.free(1), PresentedGroup.cyclic(3)])
    assert is_isomorphic(a, b)


def test_isomorphic_counterexample_groups():
    a = PresentedGroup.from_invariants(2, [4, 4])
    b = PresentedGroup.from_invariants(2, [2, 2, 2, 2])
    assert not is_isomorphic(a, b)


# homomorphism validation ---------------------------------------------------

def test_torsion_map_validity():
    z2, z4 = PresentedGroup.cyclic(2), PresentedGroup.cyclic(4)
    GroupHom(z2, z4, [[2]])
    with pytest.raises(InvalidHomomorphism):
        GroupHom(z2, z4, [[1]])
    with pytest.raises(InvalidHomomorphism):
        GroupHom(z2, PresentedGroup.free(1), [[1]])
