"""Command-line front end.

Exit status: 0 success, 1 a NOT_GOOD verdict (or failed predicate), 2 bad
input, 3 undecided within the search budget.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import circle
from .abelian import PresentedGroup
from .elliott import EllInvariant, Status, crossed_product_invariants, hk_check
from .errors import HKError, ModelError, NotIntegral, SearchBudgetExceeded
from .fixtures import FIXTURE_NAMES, fixture
from .mapping_torus import chern_assemble, chern_conditions, mapping_torus_cohomology, pv_ktheory
from .modelfile import DeclaredModel, ModelFile, load
from .orbit_break import (OrbitBreakInput, hypotheses, orbit_break_homology,
                          orbit_break_invariants, orbit_break_ktheory, orbit_break_les)
from .zaction import (Ambiguous, GradedInvariant, SpaceModel,
                      groupoid_homology_from_cohomology, z2_grade)

EXIT_OK, EXIT_NOT_GOOD, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3

COMMANDS = ("homology", "ktheory", "mapping-torus", "chern", "circle-pair", "orbit-break",
            "elliott", "hk-check", "fixtures")


class Report:
    def __init__(self, lines=None, data=None, status=EXIT_OK):
        self.lines = list(lines or [])
        self.data = dict(data or {})
        self.status = status


# --------------------------------------------------------------------------
# inputs
# --------------------------------------------------------------------------


def _model_file(args) -> ModelFile:
    if args.model and args.fixture:
        raise ModelError("give either --model or --fixture, not both")
    if args.model:
        return load(args.model)
    if args.fixture:
        if args.fixture not in FIXTURE_NAMES:
            raise ModelError(f"unknown fixture {args.fixture!r}; available: "
                             + ", ".join(FIXTURE_NAMES))
        return fixture(args.fixture)
    raise ModelError("no input: use --model <path> or --fixture <name>")


def _entry(args):
    return _model_file(args).resolve(args.name)


def _graded_json(g: GradedInvariant) -> dict:
    out = {}
    for n in g.degrees():
        e = g.entries[n]
        if isinstance(e, Ambiguous):
            out[str(n)] = {"extension_of": str(e.quotient), "by": str(e.sub)}
        elif not e.group.is_trivial():
            out[str(n)] = str(e.group)
    return out


def _homology_of(entry) -> GradedInvariant:
    if isinstance(entry, OrbitBreakInput):
        return orbit_break_homology(entry, require_dimension=False)
    if isinstance(entry, DeclaredModel):
        return entry.graded()
    return groupoid_homology_from_cohomology(entry)


def _invariants_of(entry, budget):
    if isinstance(entry, OrbitBreakInput):
        r = orbit_break_invariants(entry, require_dimension=False, budget=budget)
        return r.k_side, r.h_side
    if isinstance(entry, DeclaredModel):
        return entry.invariants()
    return crossed_product_invariants(entry)


def _space(entry, command) -> SpaceModel:
    if not isinstance(entry, SpaceModel):
        raise ModelError(f"{command} needs a space model, not an orbit break or a declared "
                         "invariant")
    return entry


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_homology(args) -> Report:
    g = _homology_of(_entry(args))
    if args.degree is not None:
        e = g.at(args.degree)
        if isinstance(e, Ambiguous):
            line = f"H_{args.degree}: extension of {e.quotient} by {e.sub}"
        else:
            line = f"H_{args.degree} ≅ {e.group}"
        return Report([line], {"degree": args.degree, "group": line.split("≅ ")[-1]})
    lines = g.format("H") or ["H_* ≅ 0"]
    data = {"homology": _graded_json(g)}
    if g.is_resolved():
        ev, od = z2_grade(g)
        lines.append(f"H_ev ≅ {ev}, H_od ≅ {od}")
        data.update(even=str(ev), odd=str(od))
    return Report(lines, data)


def cmd_ktheory(args) -> Report:
    entry = _entry(args)
    if isinstance(entry, DeclaredModel):
        k, _ = entry.invariants()
        lines = [f"K_0 ≅ {k.even}", f"K_1 ≅ {k.odd}"]
        unit = k.unit
    else:
        pv = orbit_break_ktheory(entry) if isinstance(entry, OrbitBreakInput) else pv_ktheory(entry)
        lines = pv.format()
        unit = pv.unit_image
    if unit is not None:
        lines.append(f"[1] = {unit}")
    return Report(lines, {"k0": lines[0].split("≅ ")[-1], "k1": lines[1].split("≅ ")[-1],
                          "unit": unit})


def cmd_mapping_torus(args) -> Report:
    x = _space(_entry(args), "mapping-torus")
    g = mapping_torus_cohomology(x)
    if args.degree is not None:
        e = g.at(args.degree)
        grp = f"extension of {e.quotient} by {e.sub}" if isinstance(e, Ambiguous) else str(e.group)
        return Report([f"H^{args.degree}(M) ≅ {grp}"], {"degree": args.degree, "group": grp})
    lines = g.format("H", lower=False)
    return Report(lines or ["H^*(M) ≅ 0"], {"cohomology": _graded_json(g)})


def cmd_chern(args) -> Report:
    x = _space(_entry(args), "chern")
    v = chern_conditions(x)
    lines = [f"condition (i): {'holds' if v.condition_i else 'fails'}",
             f"condition (ii): {'holds' if v.condition_ii else 'fails'}"]
    lines += [f"  {r}" for r in v.reasons]
    data = {"condition_i": v.condition_i, "condition_ii": v.condition_ii,
            "reasons": list(v.reasons)}
    status = EXIT_OK
    try:
        corr = chern_assemble(x, rational=args.rational)
    except NotIntegral:
        lines.append("no integral identification: HK-goodness is not predicted")
        return Report(lines, data, EXIT_NOT_GOOD)
    for r in list(corr.rows) + list(corr.totals):
        ok = r.rank_match if args.rational else r.match
        lines.append(f"{r.label}: {r.k_group} vs {r.h_group} "
                     f"{'match' if ok else 'MISMATCH'}")
    data["correspondence"] = corr.ok()
    if not corr.ok():
        status = EXIT_NOT_GOOD
    return Report(lines, data, status)


_POINT = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)?\s*(?:([+-])?\s*(\d*)\s*[θt])?\s*$")


def _parse_point(text: str, theta) -> circle.CirclePoint:
    m = _POINT.match(text)
    if not m or not text.strip():
        raise ModelError(f"cannot read circle point {text!r}: use p/q or p/q+kθ")
    p = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    q = 0
    if "θ" in text or "t" in text:
        q = int(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
    return circle.CirclePoint(p, q, theta)


def parse_cycle(spec: str, theta) -> circle.H0Chain:
    """``phi0``, ``phi0:k``, ``phi1`` (point mass at 0) or ``phi1:c@x,c@x,...``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind == "phi0":
        try:
            k = int(rest) if rest.strip() else 1
        except ValueError:
            raise ModelError(f"phi0 takes an integer, got {rest!r}") from None
        return circle.phi0(k, theta)
    if kind == "phi1":
        b = circle.JumpFn()
        if not rest.strip():
            b = circle.point_mass(circle.CirclePoint(0, 0, theta))
        for part in rest.split(","):
            if not part.strip():
                continue
            c, sep, x = part.partition("@")
            if not sep:
                raise ModelError(f"point mass {part!r} must look like c@x")
            try:
                coeff = int(c)
            except ValueError:
                raise ModelError(f"coefficient {c!r} is not an integer") from None
            b = b + circle.point_mass(_parse_point(x, theta), coeff)
        return circle.phi1(b, theta)
    raise ModelError(f"unknown cycle {spec!r}: use phi0[:k] or phi1[:c@x,...]")


def cmd_circle_pair(args) -> Report:
    spec = args.theta
    if spec is None and (args.model or args.fixture):
        mf = _model_file(args)
        spec = mf.theta
    theta = circle.Theta.parse(spec or "golden")
    c = parse_cycle(args.cycle or "phi1", theta)
    norm = circle.normalize_cycle(c)
    val = circle.pair_lebesgue(c)
    lines = [f"θ = [0; {theta.describe()}]",
             f"class: n = {norm.n}, m = {norm.m} ({len(norm.moves)} moves)",
             f"pairing: {val}"]
    return Report(lines, {"theta": theta.describe(), "n": norm.n, "m": norm.m,
                          "pairing": val.to_json()})


def cmd_orbit_break(args) -> Report:
    entry = _entry(args)
    if not isinstance(entry, OrbitBreakInput):
        raise ModelError("orbit-break needs an orbit_breaks entry")
    hyp = hypotheses(entry)
    lines = ["hypotheses:"]
    for c, v in hyp.items():
        lines.append(f"  {c}: {'undetermined' if v is None else ('yes' if v else 'no')}")
    les = orbit_break_les(entry)
    lines += les.format()
    data = {"hypotheses": hyp, "nodes": [[n.label, None if n.group is None else str(n.group)]
                                         for n in les.nodes],
            "isomorphisms": les.isomorphisms,
            "exact": None if les.exactness is None else les.exactness.ok}
    status = EXIT_OK if les.exactness is None or les.exactness.ok else EXIT_NOT_GOOD
    return Report(lines, data, status)


def _describe(inv: EllInvariant) -> list[str]:
    return [f"{inv.label}:"] + [f"  {s}" for s in inv.describe()]


def cmd_elliott(args) -> Report:
    k, h = _invariants_of(_entry(args), args.search_budget)
    return Report(_describe(k) + _describe(h),
                  {"k": k.describe(), "h": h.describe()})


def _verdict_report(v, lines, data) -> Report:
    lines.append(f"verdict: {v.status.value}" + (f" ({v.layer} layer)" if v.layer else ""))
    lines.append(f"  {v.reason}")
    data.update(status=v.status.value, layer=v.layer, reason=v.reason)
    if v.good:
        data["even_witness"] = v.even_witness.tolist()
        data["odd_witness"] = v.odd_witness.tolist()
        lines.append(f"  even witness: {v.even_witness.tolist()}")
        lines.append(f"  odd witness: {v.odd_witness.tolist()}")
    code = {Status.GOOD: EXIT_OK, Status.NOT_GOOD: EXIT_NOT_GOOD,
            Status.UNDECIDED: EXIT_UNDECIDED}[v.status]
    return Report(lines, data, code)


def cmd_hk_check(args) -> Report:
    mf = _model_file(args)
    entry = mf.resolve(args.name)
    k, h = _invariants_of(entry, args.search_budget)
    if args.against is None:
        lines = [f"comparing {k.label} with {h.label}"]
        return _verdict_report(hk_check(k, h, budget=args.search_budget), lines, {})
    fix, _, name = args.against.partition(":")
    other = fixture(fix).resolve(name or None) if fix in FIXTURE_NAMES else mf.resolve(fix)
    _, h2 = _invariants_of(other, args.search_budget)
    lines = [f"comparing {h.label} with {h2.label} (Z/2-graded homology)"]
    return _verdict_report(hk_check(h, h2, budget=args.search_budget), lines, {})


def _fixture_summary(name: str, budget: int) -> tuple[str, dict]:
    mf = fixture(name)
    entry = mf.resolve()
    g = _homology_of(entry)
    k, h = _invariants_of(entry, budget)
    v = hk_check(k, h, budget=budget)
    prof = "; ".join(s.replace(" ≅ ", " = ") for s in g.format("H"))
    return (f"{name}: {prof} | hk-check {v.status.value}",
            {"homology": _graded_json(g), "status": v.status.value})


def cmd_fixtures(args) -> Report:
    if not args.all:
        return Report(list(FIXTURE_NAMES), {"fixtures": list(FIXTURE_NAMES)})
    lines, data = [], {}
    for name in FIXTURE_NAMES:
        line, d = _fixture_summary(name, args.search_budget)
        lines.append(line)
        data[name] = d
    return Report(lines, data)


HANDLERS = {
    "homology": cmd_homology, "ktheory": cmd_ktheory, "mapping-torus": cmd_mapping_torus,
    "chern": cmd_chern, "circle-pair": cmd_circle_pair, "orbit-break": cmd_orbit_break,
    "elliott": cmd_elliott, "hk-check": cmd_hk_check, "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkgood",
                                description="Groupoid homology, K-theory and HK-goodness checks "
                                            "for Z-actions and orbit-breaking groupoids.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--model", help="path to a JSON model file")
    p.add_argument("--fixture", help="name of a built-in fixture")
    p.add_argument("--name", help="entry of the model file to use")
    p.add_argument("--theta", help="θ as a name or continued fraction terms")
    p.add_argument("--degree", type=int, help="report a single degree")
    p.add_argument("--rational", action="store_true", help="compare ranks only")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--search-budget", type=int, default=10 ** 4, dest="search_budget")
    p.add_argument("--cycle", help="circle cycle: phi0[:k] or phi1[:c@x,...]")
    p.add_argument("--against", help="entry or fixture[:entry] whose homology to compare with")
    p.add_argument("--all", action="store_true", help="run every fixture")
    return p


def run(argv=None) -> tuple[Report, str]:
    args = build_parser().parse_args(argv)
    try:
        report = HANDLERS[args.command](args)
    except SearchBudgetExceeded as e:
        report = Report([f"undecided: {e}"], {"error": str(e)}, EXIT_UNDECIDED)
    except HKError as e:
        report = Report([f"error: {e}"], {"error": str(e)}, EXIT_INPUT)
    if args.json:
        text = json.dumps({"command": args.command, "exit": report.status, **report.data},
                          ensure_ascii=False, indent=2, sort_keys=True, default=str)
    else:
        text = "\n".join(report.lines)
    return report, text + "\n"


def main(argv=None) -> int:
    report, text = run(argv)
    stream = sys.stderr if report.status == EXIT_INPUT and text.startswith("error") else sys.stdout
    stream.write(text)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
