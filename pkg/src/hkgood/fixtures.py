"""Built-in model files for the worked examples.

Each fixture is stored in its JSON form and parsed on demand, so the
built-ins go through exactly the same validation as user files.
"""

from __future__ import annotations

from functools import lru_cache

from .circle import CirclePoint, Theta, pair_lebesgue, phi1, point_mass
from .modelfile import SCHEMA, ModelFile, from_dict

Z = {"free": 1}
ZERO = {"free": 0}


def _triv(g):
    return {"group": g}


def _theta_value(theta: str = "golden"):
    """Lebesgue pairing of the H_0 class of a point mass: the rotation number."""
    th = Theta.parse(theta)
    return pair_lebesgue(phi1(point_mass(CirclePoint(0, 0, th)), th)).to_json()


def _circle_model():
    t = _theta_value()
    return {
        "cohomology": {"0": _triv(Z), "1": _triv(Z)},
        "ktheory": {"0": _triv(Z), "1": _triv(Z)},
        "unit_h": [1], "unit_k": [1],
        "traces": [{"name": "lebesgue", "h0": [1], "h1": [t], "k0": [1], "k1": [t]}],
        "flags": {"connected": True, "dimension": 1, "product_of_spheres": True},
    }


def _point_model():
    return {
        "cohomology": {"0": _triv(Z)},
        "ktheory": {"0": _triv(Z), "1": _triv(ZERO)},
        "unit_h": [1], "unit_k": [1],
        "traces": [{"name": "tau", "h0": [1], "k0": [1]}],
        "flags": {"connected": True, "dimension": 0},
    }


def _y_model(coh: dict, k0: dict, k1: dict, unit_k, dimension: int):
    return {
        "cohomology": {str(q): _triv(g) for q, g in coh.items()},
        "ktheory": {"0": _triv(k0), "1": _triv(k1)},
        "unit_h": [1], "unit_k": unit_k,
        "flags": {"connected": True, "dimension": dimension},
    }


def _cantor_model():
    g0 = {"free": 2}
    ends = {"coinvariants": g0, "invariants": Z}
    return {
        "cohomology": {"0": ends},
        "ktheory": {"0": ends, "1": _triv(ZERO)},
        "unit_h": [1, 0], "unit_k": [1, 0],
        "traces": [{"name": "tau", "h0": [1, ["0", "1"]], "k0": [1, ["0", "1"]]}],
    }


# ℤ ⊕ ℤ/4 with the free generator first, as K^0 of ℝP^4
_Z_Z4 = {"generators": 2, "relations": [[0, 4]]}

_RP4 = _y_model({0: Z, 2: {"torsion": [2]}, 4: {"torsion": [2]}}, _Z_Z4, ZERO, [1, 0], 4)


def _raw() -> dict:
    wedge_action = [[0, -1], [1, -1]]
    return {
        "point": {"subject": "point", "models": {"point": _point_model()}},
        "irrational-rotation": {
            "theta": "golden", "subject": "circle", "models": {"circle": _circle_model()}},
        "wedge3": {
            "subject": "wedge3",
            "models": {"wedge3": {
                "cohomology": {"0": _triv(Z),
                               "2": {"group": {"free": 2}, "action": wedge_action},
                               "3": {"group": Z, "action": [[-1]]}},
                "ktheory": {"0": {"group": {"free": 3},
                                  "action": [[1, 0, 0], [0, 0, -1], [0, 1, -1]]},
                            "1": {"group": Z, "action": [[-1]]}},
                "unit_h": [1], "unit_k": [1, 0, 0],
                "traces": [{"name": "tau", "h0": [1], "k0": [1, 0, 0]}],
                "flags": {"connected": True, "chern_class_iso": True},
            }},
        },
        "rp4-cross": {
            "subject": "rp4xs3",
            "models": {"rp4xs3": {
                "cohomology": {"0": _triv(Z), "2": _triv({"torsion": [2]}), "3": _triv(Z),
                               "4": _triv({"torsion": [2]}), "5": _triv({"torsion": [2]}),
                               "7": _triv({"torsion": [2]})},
                "ktheory": {"0": _triv(_Z_Z4), "1": _triv(_Z_Z4)},
                "unit_h": [1], "unit_k": [1, 0],
                "traces": [{"name": "tau", "h0": [1], "k0": [1, 0]}],
                "flags": {"connected": True, "dimension": 7},
            }},
        },
        "torus-d": {
            "theta": "golden", "subject": "torus",
            "models": {"torus": {
                "cohomology": {"0": _triv(Z), "1": _triv({"free": 2}), "2": _triv(Z)},
                "ktheory": {"0": _triv({"free": 2}), "1": _triv({"free": 2})},
                "unit_h": [1], "unit_k": [1, 0],
                "traces": [{"name": "haar", "h0": [1], "h1": [["0", "1"], "1/2"],
                            "k0": [1, 0], "k1": [["0", "1"], "1/2"]}],
                "flags": {"connected": True, "dimension": 2, "product_of_spheres": True},
            }},
        },
        "sphere-d": {
            "subject": "sphere",
            "models": {"sphere": {
                "cohomology": {"0": _triv(Z), "5": _triv(Z)},
                "ktheory": {"0": _triv(Z), "1": _triv(Z)},
                "unit_h": [1], "unit_k": [1],
                "traces": [{"name": "tau", "h0": [1], "k0": [1]}],
                "flags": {"connected": True, "dimension": 5, "product_of_spheres": True},
            }},
        },
        "point-like": {
            "subject": "point-like",
            "models": {
                "Z": _point_model(),
                "Y": _y_model({0: Z, 2: {"torsion": [3]}, 3: {"torsion": [2]}},
                              {"generators": 2, "relations": [[0, 3]]}, {"torsion": [2]},
                              [1, 0], 3),
                "RP4": _RP4,
            },
            "orbit_breaks": {
                "point-like": {"x": "Z", "y": "Y", "split_declared": True},
                "point-like-rp4": {"x": "Z", "y": "RP4", "split_declared": True},
            },
        },
        "cantor-like": {
            "theta": "golden", "subject": "cantor-like",
            "models": {
                "K": _cantor_model(),
                "RP2": _y_model({0: Z, 2: {"torsion": [2]}},
                                {"generators": 2, "relations": [[0, 2]]}, ZERO, [1, 0], 2),
                "RP4": _RP4,
            },
            "orbit_breaks": {
                "cantor-like": {"x": "K", "y": "RP2", "split_declared": True},
                "cantor-like-rp4": {"x": "K", "y": "RP4", "split_declared": True},
            },
        },
        "manyhk-standard": {
            "theta": "golden", "subject": "circle", "models": {"circle": _circle_model()}},
        "manyhk-orbitbreak": {
            "theta": "golden", "subject": "manyhk-orbitbreak",
            "models": {
                "K": _cantor_model(),
                "wedge2": _y_model({0: Z, 1: {"free": 2}}, Z, {"free": 2}, [1], 1),
            },
            "orbit_breaks": {"manyhk-orbitbreak": {"x": "K", "y": "wedge2",
                                                   "split_declared": True}},
        },
        "manyhk-ample": {
            "theta": "golden", "subject": "ample",
            "declared": {"ample": {
                "homology": {"0": {"free": 2}, "1": {"free": 2}},
                "ktheory": {"0": {"free": 2}, "1": {"free": 2}},
                "unit_h": [1, 0], "unit_k": [1, 0],
                "traces": [{"name": "tau", "h": [1, ["0", "1"]], "k": [1, ["0", "1"]]}],
            }},
        },
    }


FIXTURE_NAMES = ("irrational-rotation", "rp4-cross", "wedge3", "torus-d", "sphere-d",
                 "point-like", "cantor-like", "manyhk-standard", "manyhk-orbitbreak",
                 "manyhk-ample", "point")


def fixture_dict(name: str) -> dict:
    raw = _raw()
    if name not in raw:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return {"schema": SCHEMA, **raw[name]}


@lru_cache(maxsize=None)
def fixture(name: str) -> ModelFile:
    return from_dict(fixture_dict(name))
