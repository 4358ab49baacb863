import csv
import json
import subprocess
import sys

import pytest

from copolar.cli import OPERATIONS, main

HYPERBOLA = """\
name: small
family: {name: hyperbola, params: {c: 1.0}}
audits: [involution, eq1_1, eq4_1]
grid: {directions: 30, curvature_pairs: 6}
"""


@pytest.fixture
def scenario(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(HYPERBOLA)
    return path


def test_run_writes_outputs(scenario, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(scenario), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert printed.count("HOLDS") >= 3 and "wall-clock" in printed
    report = json.loads((out / "report.json").read_text())
    assert [a["identity"] for a in report["audits"]] == ["involution", "eq1_1", "eq4_1"]
    assert report["exit_status"] == 0 and "wall_clock" not in json.dumps(report)
    rows = list(csv.reader((out / "curvature_samples.csv").open()))
    assert rows[0] == ["family", "n", "chart_u1", "x_1", "x_2", "kappa", "rho_aff", "pair_product"]
    assert len(rows) == 7 and rows[1][0] == "hyperbola"


def test_seed_override_changes_samples(scenario, tmp_path):
    main(["run", "--scenario", str(scenario), "--out", str(tmp_path / "a")])
    main(["run", "--scenario", str(scenario), "--out", str(tmp_path / "b"), "--seed", "5"])
    a = (tmp_path / "a" / "curvature_samples.csv").read_text()
    b = (tmp_path / "b" / "curvature_samples.csv").read_text()
    assert a != b


def test_legendre_scenario(tmp_path, capsys):
    path = tmp_path / "l.yaml"
    path.write_text("family: hyperbola\naudits: [eq2_1n]\ngrid: {legendre_directions: 5}\n")
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 0
    audits = json.loads((tmp_path / "o" / "report.json").read_text())["audits"]
    sup, saddle = audits
    assert sup["verdict"] == "FAILS" and sup["witness"] is not None and sup["extras"]["diverged"] == 10
    assert saddle["verdict"] == "HOLDS"


def test_unknown_audit_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("family: hyperbola\naudits: [eq9_9]\n")
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 2
    assert "eq9_9" in capsys.readouterr().err


def test_families(capsys):
    assert main(["families"]) == 0
    lines = [line for line in capsys.readouterr().out.splitlines() if line and line.split()[0] in {
        "hyperbola", "calabi", "perturbed_hyperbola", "truncated_cone", "shifted_cone"}]
    assert len(lines) == 5
    hyper = next(line for line in lines if line.startswith("hyperbola"))
    assert hyper.split()[-1] == "yes"


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["radial", "--family", "hyperbola", "--point", "1,1"], 2**0.5),
        (["support", "--family", "calabi", "--param", "n=3", "--point=-1,-1,-1"], -3.0),
        (["gauge", "--family", "hyperbola", "--param", "c=4", "--point", "2,2"], 1.0),
        (["scale_saddle", "--family", "hyperbola", "--point", "2,2"], -2.0),
    ],
)
def test_eval(argv, expected, capsys):
    assert main(["eval", *argv]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(expected, abs=1e-10)


def test_eval_vector_and_bad_point(capsys):
    assert main(["eval", "crucial_map", "--family", "hyperbola", "--point", "2,0.5"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx([-0.25, -1.0])
    assert main(["eval", "radial", "--family", "hyperbola", "--point", "a,b"]) == 2
    assert main(["eval", "crucial_map", "--family", "hyperbola", "--point", "3,3"]) == 4


DUAL_SIDE = {"support", "support_numeric", "copolar_radial", "htilde"}


def test_every_operation_evaluates(capsys):
    for name in OPERATIONS:
        p = "-1,-1" if name in DUAL_SIDE else "1,1"
        assert main(["eval", name, "--family", "hyperbola", f"--point={p}"]) == 0, name
    capsys.readouterr()


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "copolar.cli", "families"], capture_output=True, text=True)
    assert proc.returncode == 0 and "perturbed_hyperbola" in proc.stdout
