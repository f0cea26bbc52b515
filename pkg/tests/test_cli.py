"""Command-line interface: parsing, precedence, exit codes, reports."""

import json

import numpy as np
import pytest

from pinchplace import cli, oma_fairness
from pinchplace.core import PlacementSolution
from pinchplace.errors import ParseError


@pytest.fixture()
def inst2(tmp_path):
    path = tmp_path / "two.txt"
    path.write_text("-8 2\n6 -4\n")
    return str(path)


@pytest.fixture()
def inst3(tmp_path):
    path = tmp_path / "three.txt"
    path.write_text("# three users\n-12.5 3.25\n\n4.0 -1.5\n9.75 2.0  # corner\n")
    return str(path)


def test_parse_kv_text():
    got = cli.parse_kv_text("a = 1\n# note\nb=two\na = 3\n", "f")
    assert got == {"a": "3", "b": "two"}
    with pytest.raises(ParseError, match="f:2"):
        cli.parse_kv_text("a = 1\nnonsense\n", "f")
    with pytest.raises(ParseError, match="empty"):
        cli.parse_kv_text("a =\n", "f")


def test_read_layout(inst3):
    lay = cli.read_layout(inst3)
    assert lay.users == ((-12.5, 3.25), (4.0, -1.5), (9.75, 2.0))


def test_read_layout_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 4 5\n")
    with pytest.raises(ParseError, match="bad.txt:2"):
        cli.read_layout(str(bad))
    bad.write_text("x y\n")
    with pytest.raises(ParseError, match="non-numeric"):
        cli.read_layout(str(bad))
    bad.write_text("# only comments\n")
    with pytest.raises(ParseError, match="no users"):
        cli.read_layout(str(bad))
    with pytest.raises(ParseError, match="cannot read"):
        cli.read_layout(str(tmp_path / "missing.txt"))


def test_maxmin_roundtrip_with_certify(inst3, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["maxmin", inst3, "--power-dbm", "20",
                     "--certify", "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "min rate" in stdout and "PASS" in stdout
    report = json.loads(out.read_text())
    assert np.isclose(report["x_star_m"], 0.4166666666666667, rtol=1e-12)
    assert report["certify"]["pass"] is True
    assert len(report["powers_w"]) == 3


def test_powermin_report(inst3, capsys):
    assert cli.main(["powermin", inst3, "--rate-bpcu", "1.5", "--certify"]) == 0
    stdout = capsys.readouterr().out
    assert "total power" in stdout and "saving" in stdout and "PASS" in stdout


def test_outage_certifies_against_closed_form(capsys):
    code = cli.main(["outage", "--power-dbm", "8", "--rate-bpcu", "2.5",
                     "--trials", "20000", "--seed", "0", "--certify"])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "closed form" in stdout and "monte carlo" in stdout and "PASS" in stdout


def test_outage_certify_needs_two_users(capsys):
    code = cli.main(["outage", "--users", "3", "--certify"])
    assert code == 2
    assert "users = 2" in capsys.readouterr().err


def test_greedy_report(inst2, capsys):
    assert cli.main(["greedy", inst2, "--power-dbm", "10", "--rate-bpcu", "0.5",
                     "--certify"]) == 0
    stdout = capsys.readouterr().out
    assert "search:" in stdout and "fast:" in stdout
    assert "certify power-sweep" in stdout and "FAIL" not in stdout


def test_noma_report(tmp_path, capsys):
    path = tmp_path / "pair.txt"
    path.write_text("6 -4\n-8 2\n")  # deliberately unordered
    assert cli.main(["noma", str(path), "--rate-bpcu", "1.5", "--certify"]) == 0
    stdout = capsys.readouterr().out
    assert "user order by |y|: [2, 1]" in stdout
    assert "certified optimal: True" in stdout and "PASS" in stdout


def test_flag_precedence_over_set_over_config(inst3, tmp_path, capsys):
    cfgfile = tmp_path / "a.cfg"
    cfgfile.write_text("power_dbm = 10\n")
    cli.main(["maxmin", inst3, "--config", str(cfgfile)])
    assert "P = 10.00 dBm" in capsys.readouterr().out
    cli.main(["maxmin", inst3, "--config", str(cfgfile), "--set", "power_dbm=20"])
    assert "P = 20.00 dBm" in capsys.readouterr().out
    cli.main(["maxmin", inst3, "--config", str(cfgfile), "--set", "power_dbm=20",
              "--power-dbm", "25"])
    assert "P = 25.00 dBm" in capsys.readouterr().out


def test_exit_codes(inst2, tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("nope\n")
    assert cli.main(["maxmin", str(bad)]) == 2
    assert cli.main(["experiment", "--set", "nonsense=1"]) == 2
    # budget far below both rate floors
    assert cli.main(["greedy", inst2, "--power-dbm", "-35", "--rate-bpcu", "1"]) == 3
    capsys.readouterr()


def test_certification_failure_exits_4(inst3, capsys, monkeypatch):
    real = oma_fairness.solve_max_min_rate

    def corrupted(params, layout, total_w):
        sol = real(params, layout, total_w)
        return PlacementSolution(sol.x_star, sol.powers, sol.objective * 0.9)

    monkeypatch.setattr(oma_fairness, "solve_max_min_rate", corrupted)
    assert cli.main(["maxmin", inst3, "--power-dbm", "20", "--certify"]) == 4
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "certification failure" in captured.err


def test_experiment_csv_stdout_and_file(tmp_path, capsys):
    args = ["experiment", "--trials", "4", "--set", "sweep_points=2"]
    assert cli.main(args) == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("sweep_value,scheme,metric,mean,stderr,trials")
    out = tmp_path / "sweep.csv"
    assert cli.main(args + ["--out", str(out)]) == 0
    assert out.read_text() == stdout


def test_experiment_certify_spot_checks(capsys):
    code = cli.main(["experiment", "--trials", "5", "--certify",
                     "--set", "sweep_points=2", "--set", "sweep_start=10",
                     "--set", "sweep_stop=30"])
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout.count("certify") == 2 and "FAIL" not in stdout


def test_argparse_usage_error_is_systemexit():
    with pytest.raises(SystemExit):
        cli.main([])
    with pytest.raises(SystemExit):
        cli.main(["maxmin"])  # missing instance path
