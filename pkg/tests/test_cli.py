import json

import pytest

from app.cli import EXIT_ERROR, EXIT_OK, EXIT_OUT_OF_SCOPE, run


def test_check_bspline_text(capsys):
    assert run(["check", "--bspline", "2", "--a", "6/5", "--b", "7/10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: Frame" in out
    assert "atlas_label: Frame_RegionB" in out
    assert "fast_path" in out


def test_check_window_file_json(capsys, example_path):
    assert run(["check", "--window", str(example_path), "--a", "1", "--b", "3/5", "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["schema"] == 1
    assert report["verdict"] == "Frame"
    assert (report["M"], report["kappa"], report["step"]) == (2, 1, "2/3")


def test_check_not_frame(capsys, zero_pair_path):
    assert run(["check", "--window", str(zero_pair_path), "--a", "1", "--b", "3/5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: NotFrame" in out
    assert "failed_condition:" in out


def test_check_out_of_scope(capsys):
    assert run(["check", "--bspline", "2", "--a", "5/2", "--b", "1/4", "--json"]) == EXIT_OUT_OF_SCOPE
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "OutOfScope"
    assert report["atlas_label"] == "NotFrame_aGeN"


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--bspline", "2", "--a", "one", "--b", "1/2"],
        ["check", "--bspline", "2", "--a", "1"],
        ["check", "--a", "1", "--b", "1/2"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(argv) == EXIT_ERROR
    assert capsys.readouterr().err


def test_missing_window_file(capsys, tmp_path):
    assert run(["check", "--window", str(tmp_path / "nope.json"), "--a", "1", "--b", "1/2"]) == EXIT_ERROR
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_window_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"alpha": "1", "pieces": []}')
    assert run(["check", "--window", str(path), "--a", "1", "--b", "1/2"]) == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_window_round_trip(capsys, tmp_path):
    path = tmp_path / "b3.json"
    assert run(["window", "--bspline", "3", "--out", str(path)]) == EXIT_OK
    assert json.loads(path.read_text())["alpha"] == "3/2"
    assert run(["check", "--window", str(path), "--a", "2", "--b", "2/5"]) == EXIT_OK
    assert "verdict: Frame" in capsys.readouterr().out


def test_dual_csv_is_deterministic(capsys, tmp_path, example_path):
    first, second, cases = tmp_path / "h1.csv", tmp_path / "h2.csv", tmp_path / "cases.json"
    args = ["dual", "--window", str(example_path), "--a", "1", "--b", "3/5", "--grid", "401"]
    assert run(args + ["--out", str(first), "--cases", str(cases)]) == EXIT_OK
    assert run(args + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[0] == "x,h"
    assert len(lines) == 402
    assert lines[1].startswith("-2.0,")
    assert json.loads(cases.read_text())["bands"][0]["interval"] == ["5/3", "19/10"]
    assert "epsilon=1/60" in capsys.readouterr().out


def test_dual_refuses_non_frame(capsys, zero_pair_path):
    assert run(["dual", "--window", str(zero_pair_path), "--a", "1", "--b", "3/5"]) == EXIT_ERROR
    assert "needs a frame" in capsys.readouterr().err


def test_dual_out_of_scope(capsys):
    assert run(["dual", "--bspline", "2", "--a", "5/2", "--b", "1/4"]) == EXIT_OUT_OF_SCOPE
    assert capsys.readouterr().out.startswith("OutOfScope")


def test_verify_reports_json(capsys, example_path):
    argv = ["verify", "--window", str(example_path), "--a", "1", "--b", "3/5", "--grid", "300", "--tol", "1e-6"]
    assert run(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert set(report["per_n"]) == {"-1", "0", "1"}


def test_curves_csv(capsys, tmp_path, zero_pair_path):
    path = tmp_path / "curves.csv"
    assert run(["curves", "--window", str(zero_pair_path), "--out", str(path)]) == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0].startswith("kind,y_plus,y_minus,n")
    assert any(line.startswith("plus_hits_zero,1/5,-2/15,1,") for line in lines[1:])
    assert "candidate curves" in capsys.readouterr().out


def test_atlas_csv(capsys, tmp_path):
    path = tmp_path / "atlas.csv"
    assert run(["atlas", "--bspline", "3", "--res", "10", "--out", str(path)]) == EXIT_OK
    lines = path.read_text().splitlines()
    assert lines[0] == "a,b,label,evidence"
    assert len(lines) == 101
    assert "NotFrame_abGe1:" in capsys.readouterr().out


def test_zzbound_prints_estimate(capsys):
    assert run(["zzbound", "--bspline", "2", "--a", "1", "--b", "1/2", "--grid", "64"]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(1.0)
