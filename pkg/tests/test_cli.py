from pathlib import Path

import numpy as np
import pytest

from rmmcopula import efgm, parse_spec
from rmmcopula.cli import main

EXAMPLES = sorted((Path(__file__).resolve().parent.parent / "docs" / "examples").glob("*.yaml"))
RMM_PI = "{transform: rmm, base: {flip: [2], base: pi}, f: {power, a: 0.5}, g: {power, a: 0.5}}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_product(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "pi", "--point", "0.5,0.5")
    assert code == 0
    assert out == "0.5,0.5,0.25\n"


def test_eval_several_points(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "{base: efgm, theta: -0.5}", "--point", "0.2,0.3", "--point", "1,0.4")
    assert code == 0
    rows = [list(map(float, line.split(","))) for line in out.splitlines()]
    assert rows[0][2] == pytest.approx(efgm(-0.5)(0.2, 0.3), abs=1e-10)
    assert rows[1][2] == pytest.approx(0.4)


def test_eval_trivariate(capsys):
    code, out, _ = run(capsys, "eval", "--expr", "pi3", "--point", "0.5,0.5,0.5")
    assert code == 0 and out.strip() == "0.5,0.5,0.5,0.125"


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--expr", "pi", "--point", "0.5"],
        ["eval", "--expr", "pi", "--point", "0.5,1.5"],
        ["eval", "--expr", "pi", "--point", "a,b"],
        ["eval", "--expr", "pi"],
        ["eval", "--point", "0.5,0.5"],
        ["eval", "--spec", "/nonexistent/doc.yaml", "--point", "0.5,0.5"],
        ["eval", "--expr", "{base: efgm, theta: 2}", "--point", "0.5,0.5"],
        ["table", "rho", "--bases", "gumbel"],
        ["table", "rho", "--n", "x"],
        ["sample", "--expr", "{transform: mm_n, p: 1, base: {base: pi, dim: 4}, generators: [identity, identity, identity, identity]}", "--n", "3"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_bad_flag_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--bogus"])
    assert exc.value.code == 1


def test_range_error_names_node(capsys):
    _, _, err = run(capsys, "eval", "--expr", "{base: efgm, theta: 2}", "--point", "0.5,0.5")
    assert "theta" in err


def test_p_range_error(capsys):
    doc = "{transform: rmm_n, p: 3, dim: 3, base: pi3, generators: [tent, tent, tent]}"
    _, _, err = run(capsys, "eval", "--expr", doc, "--point", "0.5,0.5,0.5")
    assert "p must be" in err


def test_validate_exit_codes(capsys):
    code, out, _ = run(capsys, "validate", "--expr", RMM_PI, "--grid", "41")
    assert code == 0
    # an unattainable tolerance turns roundoff into failures
    code, _, _ = run(capsys, "validate", "--expr", "{base: clayton, theta: -0.7}", "--grid", "41", "--tol=-1e-3")
    assert code == 2


def test_measures_output(capsys):
    code, out, _ = run(capsys, "measures", "--expr", RMM_PI, "--kind", "rho")
    assert code == 0
    assert float(out.split("=")[1].split()[0]) == pytest.approx(-0.2952, abs=0.005)
    code, out, _ = run(capsys, "measures", "--expr", "m", "--kind", "all")
    assert code == 0
    assert "quadrant = PQD" in out and "lambda_L" in out and "tau" in out


def test_measures_rejects_ncopula(capsys):
    code, _, _ = run(capsys, "measures", "--expr", "pi3")
    assert code == 1


def test_small_table(capsys, tmp_path):
    out_path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table", "rho", "--bases", "pi", "--a", "0.5", "--b", "0.5", "--n", "1,inf", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "base,a,b,n,kind,value,error"
    value = float(lines[1].split(",")[5])
    assert value == pytest.approx(-0.2952, abs=0.005)
    assert lines[2].split(",")[3] == "inf"


def test_sample_determinism(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "sample", "--expr", RMM_PI, "--n", "200", "--seed", "42", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert len(paths[0].read_text().splitlines()) == 201


def test_sample_meta_and_stdout(capsys, tmp_path):
    p = tmp_path / "s.csv"
    assert run(capsys, "sample", "--expr", "pi3", "--n", "4", "--out", str(p), "--meta")[0] == 0
    assert (tmp_path / "s.meta").exists()
    code, out, _ = run(capsys, "sample", "--expr", "m", "--n", "3", "--seed", "1")
    assert code == 0 and out.splitlines()[0] == "u1,u2" and len(out.splitlines()) == 4


def test_limit_diff_decreases(capsys):
    doc = "{transform: rmm, base: pi, f: power(0.9), g: power(0.9)}"
    code, out, _ = run(capsys, "limit-diff", "--expr", doc, "--n-max", "8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,sup_distance"
    dist = np.array([float(line.split(",")[1]) for line in lines[1:]])
    assert dist.size == 9
    assert np.all(np.diff(dist) <= 1e-12)


@pytest.mark.parametrize("path", EXAMPLES, ids=lambda p: p.stem)
def test_example_documents(capsys, path):
    doc = parse_spec(path.read_text())
    point = ",".join(["0.3"] * doc.dim)
    code, out, _ = run(capsys, "eval", "--spec", str(path), "--point", point)
    assert code == 0
    value = float(out.strip().split(",")[-1])
    assert 0.0 <= value <= 0.3
