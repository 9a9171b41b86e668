"""End-to-end acceptance checks, one per criterion.

Each test prints a single PASS/FAIL line (visible with or without ``-s``)
and then asserts.  Fixture criteria also assert the per-fixture time limit.
"""

import random
import time
from contextlib import contextmanager

import pytest

from hkgood.abelian import GroupHom, PresentedGroup
from hkgood.circle import (CirclePoint, RealExpr, Theta, normalize_cycle, pair_lebesgue, phi0,
                           phi1, point_mass)
from hkgood.complexes import (ChainComplex, ComplexMap, ShortExactSequence, homology,
                              long_exact_sequence, mapping_cone, mapping_cone_ses, shift)
from hkgood.elliott import (SimplexDescriptor, Status, crossed_product_invariants, hk_check,
                            pairing_eval)
from hkgood.fixtures import FIXTURE_NAMES, fixture
from hkgood.intmat import IntMatrix, smith_normal_form
from hkgood.mapping_torus import chern_conditions, pv_ktheory
from hkgood.orbit_break import (orbit_break_homology, orbit_break_invariants, orbit_break_les,
                                pointlike_invariant)
from hkgood.zaction import (Resolved, SpaceModel, ZModule, coinvariants, cohomology_from_chain,
                            groupoid_homology_from_cohomology, hyperhomology_z, invariants,
                            z2_grade)

from builders import (CIRCLE_GOLD, CIRCLE_SILVER, assert_snf_sound, diag, oracle_class,
                      random_cycle, random_known_complex, random_matrix)

FIXTURE_LIMIT = 1.0
THETA = RealExpr(0, 1)


def canon(g):
    return g.canonical()


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, detail=""):
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number} {status}: {title}"
        if detail:
            line += f" [{detail}]"
        if failures:
            line += " -- " + "; ".join(failures)
        with capsys.disabled():
            print("\n" + line)
        assert not failures, line
    return emit


class Checks:
    """Collects named failures instead of stopping at the first one."""

    def __init__(self):
        self.failures = []
        self.timings = {}

    def expect(self, cond, what):
        if not cond:
            self.failures.append(what)

    @contextmanager
    def timed(self, name):
        t0 = time.perf_counter()
        try:
            yield
        except Exception as e:  # a crash is a failure line, not a traceback
            self.failures.append(f"{name}: {type(e).__name__}: {e}")
        dt = time.perf_counter() - t0
        self.timings[name] = dt
        self.expect(dt < FIXTURE_LIMIT, f"{name} took {dt:.2f}s")

    def detail(self):
        return ", ".join(f"{k} {v:.2f}s" for k, v in self.timings.items())


def unimodular_values(values):
    """Do the a + bθ values of two generators form a basis of ℤ + ℤθ?"""
    return (len(values) == 2 and all(v.a.denominator == v.b.denominator == 1 for v in values)
            and abs(values[0].a * values[1].b - values[0].b * values[1].a) == 1)


# 1 -------------------------------------------------------------------------------

def test_criterion_1_irrational_rotation(report):
    ch = Checks()
    with ch.timed("irrational-rotation"):
        th = Theta.parse("golden")
        one, gen = phi0(1, th), phi1(point_mass(CirclePoint(0, 0, th)), th)
        ch.expect(tuple(normalize_cycle(one))[:2] == (1, 0), "phi0(1) class")
        ch.expect(tuple(normalize_cycle(gen))[:2] == (0, 1), "phi1(δ0) class")
        ch.expect(pair_lebesgue(one) == RealExpr(1), "pairing of phi0(1)")
        ch.expect(pair_lebesgue(gen) == THETA, "pairing of phi1(δ0)")
        g = groupoid_homology_from_cohomology(fixture("irrational-rotation").resolve())
        ch.expect(g.profile() == {1: (1, ()), 0: (2, ()), -1: (1, ())},
                  f"homology profile {g.profile()}")
    report(1, "irrational rotation", ch.failures, ch.detail())


# 2 -------------------------------------------------------------------------------

def test_criterion_2_wedge(report):
    ch = Checks()
    with ch.timed("wedge3"):
        _, d, _ = smith_normal_form(IntMatrix([[1, 1], [-1, 2]]))
        ch.expect(diag(d) == [1, 3], f"SNF diagonal {diag(d)}")
        x = fixture("wedge3").resolve()
        k0, k1 = pv_ktheory(x).groups()
        ch.expect(canon(k0) == (1, (3,)) and canon(k1) == (1, (2,)),
                  f"K-theory {canon(k0)}, {canon(k1)}")
        ev, od = z2_grade(groupoid_homology_from_cohomology(x))
        ch.expect(canon(ev) == (1, (3,)) and canon(od) == (1, (2,)),
                  f"graded homology {canon(ev)}, {canon(od)}")
        k, h = crossed_product_invariants(x)
        ch.expect(hk_check(k, h).status is Status.GOOD, "hk_check")
    report(2, "wedge example", ch.failures, ch.detail())


# 3 -------------------------------------------------------------------------------

def test_criterion_3_counterexample(report):
    ch = Checks()
    with ch.timed("rp4-cross"):
        x = fixture("rp4-cross").resolve()
        k0, k1 = pv_ktheory(x).groups()
        ch.expect(canon(k0) == canon(k1) == (2, (4, 4)), f"K-theory {canon(k0)}, {canon(k1)}")
        ev, od = z2_grade(groupoid_homology_from_cohomology(x))
        ch.expect(canon(ev) == canon(od) == (2, (2, 2, 2, 2)),
                  f"graded homology {canon(ev)}, {canon(od)}")
        k, h = crossed_product_invariants(x)
        v = hk_check(k, h)
        ch.expect(v.status is Status.NOT_GOOD and v.layer == "group",
                  f"verdict {v.status.value} at {v.layer}")
    report(3, "counterexample", ch.failures, ch.detail())


# 4 -------------------------------------------------------------------------------

THREE = {
    "manyhk-orbitbreak": ["H_0 ≅ ℤ^2", "H_-1 ≅ ℤ^2"],
    "manyhk-standard": ["H_1 ≅ ℤ", "H_0 ≅ ℤ^2", "H_-1 ≅ ℤ"],
    "manyhk-ample": ["H_1 ≅ ℤ^2", "H_0 ≅ ℤ^2"],
}


def homology_side(name):
    entry = fixture(name).resolve()
    if name == "manyhk-orbitbreak":
        inv = orbit_break_invariants(entry)
        return inv.h_side, orbit_break_homology(entry)
    if name == "manyhk-standard":
        return crossed_product_invariants(entry)[1], groupoid_homology_from_cohomology(entry)
    return entry.invariants()[1], entry.graded()


def test_criterion_4_three_models(report):
    ch = Checks()
    sides = {}
    for name, expect in THREE.items():
        with ch.timed(name):
            h, graded = homology_side(name)
            ch.expect(graded.format("H") == expect, f"{name} printed {graded.format('H')}")
            vals = pairing_eval(h, h.unit) + [h.traces[0](g) for g in h.even.standard_generators()]
            ch.expect(vals[0] == RealExpr(1), f"{name} unit pairs to {vals[0]}")
            ch.expect(unimodular_values(vals[1:]), f"{name} pairing image {vals[1:]}")
            sides[name] = h
    names = list(sides)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            with ch.timed(f"{a}/{b}"):
                v = hk_check(sides[a], sides[b])
                ch.expect(v.status is Status.GOOD, f"{a} vs {b}: {v.status.value}")
    report(4, "three models", ch.failures, ch.detail())


# 5 -------------------------------------------------------------------------------

def test_criterion_5_point_like(report):
    ch = Checks()
    with ch.timed("point-like"):
        mf = fixture("point-like")
        x = mf.resolve("point-like").x_model
        g = groupoid_homology_from_cohomology(x)
        ch.expect(g.profile() == {1: (1, ()), 0: (1, ())}, f"X homology {g.profile()}")
        inv = pointlike_invariant(PresentedGroup.cyclic(3), PresentedGroup.cyclic(2),
                                  SimplexDescriptor.point())
        k = inv.k_side
        ch.expect(canon(k.even) == (1, (3,)) and canon(k.odd) == (0, (2,)), "groups")
        ch.expect(k.even.canonical_coords(k.unit) == (0, 1), "unit is (1, 0)")
        gens = k.even.standard_generators()
        ch.expect([k.traces[0](e) for e in gens] == [RealExpr(0), RealExpr(1)], "ρ(n, g) = n")
        ch.expect(inv.verdict.status is Status.GOOD, "pointlike_invariant verdict")
        ob = orbit_break_invariants(mf.resolve("point-like"))
        ch.expect(ob.verdict.status is Status.GOOD, f"fixture verdict {ob.verdict.status.value}")
    report(5, "point-like", ch.failures, ch.detail())


# 6 -------------------------------------------------------------------------------

def test_criterion_6_cantor_like(report):
    ch = Checks()
    with ch.timed("cantor-like"):
        k_model = fixture("cantor-like").resolve("cantor-like").x_model
        h0 = k_model.h_module(0)
        g = groupoid_homology_from_cohomology(k_model)
        expect = {1: (1, ()), 0: canon(coinvariants(h0))}
        ch.expect(g.profile() == expect, f"profile {g.profile()} vs {expect}")
        ch.expect(canon(invariants(h0)) == (1, ()), "H_1 from the invariants")
    report(6, "Cantor-like", ch.failures, ch.detail())


# 7 -------------------------------------------------------------------------------

def snf_soundness(rng, ch):
    for i in range(500):
        m = random_matrix(rng, rng.randint(0, 8), rng.randint(0, 8))
        try:
            assert_snf_sound(m)
        except AssertionError:
            ch.failures.append(f"(a) SNF unsound on matrix {i}")
    return "500 matrices"


def cone_acyclicity(rng, ch):
    for i in range(100):
        c = random_known_complex(rng, degrees=range(-2, 3)).complex
        cone = mapping_cone(ComplexMap.identity(c))
        if not all(homology(cone, n).is_trivial() for n in cone.degree_range(1)):
            ch.failures.append(f"(b) cone of identity not acyclic on complex {i}")
    return "100 complexes"


def fixture_sequences():
    """Every long exact sequence the fixtures assemble."""
    for name in FIXTURE_NAMES:
        mf = fixture(name)
        for ob in mf.orbit_breaks:
            les = orbit_break_les(mf.resolve(ob))
            yield f"{ob} orbit-break", les.exactness
        for mname, x in mf.models.items():
            mods = {-q: m for q, m in x.cohomology.items() if isinstance(m, ZModule)}
            if not mods:
                continue
            c = ChainComplex({n: m.group for n, m in mods.items()})
            f = ComplexMap(c, c, {n: GroupHom.identity(m.group) - m.alpha
                                  for n, m in mods.items()})
            cone = mapping_cone_ses(f)
            ses = ShortExactSequence(cone.inclusion, cone.projection)
            yield f"{name}/{mname} cone of id - α", long_exact_sequence(ses).verify()


def fixture_les(rng, ch):
    count = 0
    for label, ex in fixture_sequences():
        count += 1
        if ex is None or not ex.ok:
            ch.failures.append(f"(c) {label} not exact")
    return f"{count} sequences"


def random_space(rng):
    k = random_known_complex(rng, degrees=range(-3, 1), max_pieces=4, with_action=True)
    return k, SpaceModel("random", cohomology_from_chain(k.complex, k.alphas))


def rank_identity(rng, ch):
    for i in range(200):
        k, x = random_space(rng)
        exact = hyperhomology_z(k.complex, k.alphas)
        for n in range(-5, 4):
            expect = (coinvariants(x.h_module(-n)).free_rank
                      + invariants(x.h_module(1 - n)).free_rank)
            if exact.group(n).free_rank != expect:
                ch.failures.append(f"(d) rank identity fails on complex {i} degree {n}")
    return "200 complexes"


def split_agreement(rng, ch):
    split = 0
    for i in range(200):
        k, x = random_space(rng)
        g = groupoid_homology_from_cohomology(x)
        exact = hyperhomology_z(k.complex, k.alphas)
        resolved = [n for n in range(-5, 4) if isinstance(g.at(n), Resolved)]
        split += len(resolved)
        for n in resolved:
            if canon(exact.group(n)) != canon(g.at(n).group):
                ch.failures.append(f"(e) routes disagree on complex {i} degree {n}")
    ch.expect(split > 0, "(e) no split cases generated")
    return f"{split} split degrees"


def circle_consistency(rng, ch):
    for i in range(200):
        th = CIRCLE_GOLD if i % 2 else CIRCLE_SILVER
        c, b, v0 = random_cycle(rng, th)
        n, m, _ = normalize_cycle(c)
        if (n, m) != oracle_class(th, b, v0) or pair_lebesgue(c) != RealExpr(n, m):
            ch.failures.append(f"(f) circle cycle {i} inconsistent")
    return "200 cycles"


def shift_law(rng, ch):
    for i in range(100):
        c = random_known_complex(rng).complex
        k = rng.randint(-4, 4)
        s = shift(c, k)
        if any(canon(homology(s, n + k)) != canon(homology(c, n)) for n in c.degree_range(1)):
            ch.failures.append(f"(g) shift law fails on complex {i} (k = {k})")
    return "100 complexes"


PARTS = {"a": snf_soundness, "b": cone_acyclicity, "c": fixture_les, "d": rank_identity,
         "e": split_agreement, "f": circle_consistency, "g": shift_law}


def test_criterion_7_property_suites(report):
    ch = Checks()
    notes = []
    for key, part in PARTS.items():
        rng = random.Random(f"acceptance-{key}")
        t0 = time.perf_counter()
        notes.append(f"({key}) {part(rng, ch)} {time.perf_counter() - t0:.1f}s")
    report(7, "property suites", ch.failures, ", ".join(notes))


# 8 -------------------------------------------------------------------------------

def test_criterion_8_chern_predicates(report):
    ch = Checks()
    with ch.timed("chern"):
        models = {(n, m): x for n in FIXTURE_NAMES for m, x in fixture(n).models.items()}
        tori = [k for k, x in models.items() if x.flags.get("product_of_spheres")]
        low = [k for k, x in models.items() if x.flags.get("dimension", 99) <= 3]
        rp4 = [k for k in models if "rp4" in k[1].lower()]
        ch.expect(tori and low and rp4, "fixture families missing")
        for k in tori:
            ch.expect(chern_conditions(models[k]).condition_ii, f"{k} fails (ii)")
        for k in low:
            ch.expect(chern_conditions(models[k]).condition_i, f"{k} fails (i)")
        for k in rp4:
            v = chern_conditions(models[k])
            ch.expect(not v.condition_i and not v.condition_ii, f"{k} passes a condition")
        ks, hs = crossed_product_invariants(fixture("rp4-cross").resolve())
        ch.expect(not hk_check(ks, hs).good, "rp4-cross hk_check passes")
        for fx, entry in (("point-like", "point-like-rp4"), ("cantor-like", "cantor-like-rp4")):
            inv = orbit_break_invariants(fixture(fx).resolve(entry), require_dimension=False)
            ch.expect(inv.verdict.status is Status.NOT_GOOD, f"{entry} hk_check passes")
    report(8, "Chern predicates", ch.failures,
           f"{len(tori)} torus/sphere, {len(low)} low-dimensional, {len(rp4)} RP4 models; "
           + ch.detail())
