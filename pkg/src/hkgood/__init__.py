"""Exact homology, K-theory and HK-goodness checks for Z-actions on spaces
and for orbit-breaking groupoids."""

from .abelian import GroupHom, PresentedGroup, cokernel, kernel
from .circle import RealExpr, Theta
from .elliott import EllInvariant, SimplexDescriptor, Status, TraceFunctional, hk_check
from .errors import HKError
from .fixtures import FIXTURE_NAMES, fixture
from .intmat import IntMatrix, smith_normal_form
from .mapping_torus import chern_conditions, mapping_torus_cohomology, pv_ktheory
from .orbit_break import (OrbitBreakInput, cantorlike_invariant, orbit_break_homology,
                          orbit_break_ktheory, orbit_break_les, pointlike_invariant)
from .zaction import SpaceModel, ZModule, groupoid_homology_from_cohomology, hyperhomology_z

__version__ = "0.1.0"

__all__ = [
    "GroupHom", "PresentedGroup", "cokernel", "kernel", "RealExpr", "Theta", "EllInvariant",
    "SimplexDescriptor", "Status", "TraceFunctional", "hk_check", "HKError", "FIXTURE_NAMES",
    "fixture", "IntMatrix", "smith_normal_form", "chern_conditions", "mapping_torus_cohomology",
    "pv_ktheory", "OrbitBreakInput", "cantorlike_invariant", "orbit_break_homology",
    "orbit_break_ktheory", "orbit_break_les", "pointlike_invariant", "SpaceModel", "ZModule",
    "groupoid_homology_from_cohomology", "hyperhomology_z",
]
