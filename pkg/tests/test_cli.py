import json
import subprocess
import sys

import pytest

from hkgood.cli import main, run
from hkgood.fixtures import FIXTURE_NAMES, fixture


def out(*argv):
    report, text = run(list(argv))
    return report.status, text


def test_hk_check_cross_product_not_good():
    code, text = out("hk-check", "--fixture", "rp4-cross")
    assert code == 1
    assert "NOT_GOOD (group layer)" in text


def test_hk_check_rotation_good():
    code, text = out("hk-check", "--fixture", "irrational-rotation")
    assert code == 0 and "verdict: GOOD" in text


def test_hk_check_against_other_model():
    code, _ = out("hk-check", "--fixture", "manyhk-standard", "--against", "manyhk-ample")
    assert code == 0
    code, _ = out("hk-check", "--fixture", "manyhk-orbitbreak", "--against", "manyhk-standard")
    assert code == 0


def test_circle_pair_generator():
    code, text = out("circle-pair", "--theta", "golden", "--cycle", "phi1")
    assert code == 0
    assert text.splitlines()[-1] == "pairing: 0 + 1·θ"


def test_circle_pair_point_masses():
    _, text = out("circle-pair", "--theta", "silver", "--cycle", "phi1:2@1/2")
    assert "n = 0, m = 2" in text
    _, text = out("circle-pair", "--cycle", "phi0:3")
    assert text.splitlines()[-1] == "pairing: 3 + 0·θ"


def test_homology_of_point():
    code, text = out("homology", "--fixture", "point")
    assert code == 0
    assert text.splitlines()[:2] == ["H_1 ≅ ℤ", "H_0 ≅ ℤ"]


def test_single_degree():
    _, text = out("homology", "--fixture", "wedge3", "--degree", "-2")
    assert text == "H_-2 ≅ ℤ/3\n"


def test_mapping_torus_and_ktheory():
    _, text = out("mapping-torus", "--fixture", "irrational-rotation")
    assert text.splitlines() == ["H^2 ≅ ℤ", "H^1 ≅ ℤ^2", "H^0 ≅ ℤ"]
    code, text = out("ktheory", "--fixture", "point-like", "--json")
    data = json.loads(text)
    assert code == 0 and data["k0"] == "ℤ ⊕ ℤ/3" and data["k1"] == "ℤ/2"


def test_chern_exit_status():
    assert out("chern", "--fixture", "rp4-cross")[0] == 1
    # ranks agree, so the rational comparison succeeds
    assert out("chern", "--fixture", "rp4-cross", "--rational")[0] == 0
    assert out("chern", "--fixture", "irrational-rotation")[0] == 0


def test_orbit_break_report():
    code, text = out("orbit-break", "--fixture", "point-like")
    assert code == 0 and "exactness: verified" in text
    assert out("orbit-break", "--fixture", "point")[0] == 2


@pytest.mark.parametrize("argv", [
    ["homology", "--fixture", "nope"],
    ["homology"],
    ["circle-pair", "--cycle", "phi2"],
    ["circle-pair", "--theta", "pi"],
    ["homology", "--fixture", "point", "--model", "x.json"],
])
def test_bad_input_exits_2(argv):
    assert out(*argv)[0] == 2


def test_bad_model_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\n  oops", encoding="utf-8")
    code, text = out("homology", "--model", str(p))
    assert code == 2 and "line 2" in text


def test_model_file_matches_fixture(tmp_path):
    p = tmp_path / "wedge.json"
    p.write_text(fixture("wedge3").dumps(), encoding="utf-8")
    assert out("homology", "--model", str(p)) == out("homology", "--fixture", "wedge3")


def test_unknown_command():
    with pytest.raises(SystemExit) as err:
        run(["frobnicate"])
    assert err.value.code == 2


def test_undecided_exit_3():
    code, text = out("hk-check", "--fixture", "torus-d", "--search-budget", "1")
    assert code == 3 and "UNDECIDED" in text
    assert out("hk-check", "--fixture", "torus-d")[0] == 0


def test_json_report():
    code, text = out("hk-check", "--fixture", "irrational-rotation", "--json")
    data = json.loads(text)
    assert data["command"] == "hk-check" and data["exit"] == 0
    assert data["status"] == "GOOD"
    assert data["even_witness"] == [[1, 0], [0, 1]]


def test_reports_are_deterministic():
    for argv in (["fixtures", "--all", "--json"], ["orbit-break", "--fixture", "cantor-like"],
                 ["elliott", "--fixture", "manyhk-orbitbreak"]):
        assert out(*argv)[1] == out(*argv)[1]


def test_fixtures_listing():
    _, text = out("fixtures")
    assert text.split() == list(FIXTURE_NAMES)
    code, text = out("fixtures", "--all")
    lines = text.splitlines()
    assert code == 0 and len(lines) == len(FIXTURE_NAMES)
    assert lines[1].endswith("hk-check NOT_GOOD")
    assert all(l.endswith("GOOD") for l in lines)


def test_main_writes_errors_to_stderr(capsys):
    assert main(["homology", "--fixture", "nope"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and captured.err.startswith("error:")


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hkgood", "homology", "--fixture", "point"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.startswith("H_1 ≅ ℤ")
