import io
import json
import re

import jsonschema
import numpy as np
import pytest

from entroseg import schemas
from entroseg.cli import main
from entroseg.core import index_signal, piecewise_test_signal, read_signal_csv, write_signal_csv


def _write(tmp_path, s, name="sig.csv"):
    p = tmp_path / name
    with open(p, "w", newline="") as fh:
        write_signal_csv(s, fh)
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_segment_fixture_csv(tmp_path, capsys):
    path = _write(tmp_path, piecewise_test_signal())
    code, out, _ = _run(capsys, ["segment", path, "--r2", "0.998"])
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.SEGMENT_REPORT)
    assert len(rep["segments"]) == 4
    assert [r["label"] for r in rep["segments"]] == ["homogeneous", "homogeneous",
                                                     "singularity", "homogeneous"]
    assert rep["segments"][3]["a"] == pytest.approx(2.9992, abs=0.05)


def test_segment_csv_format(capsys):
    code, out, _ = _run(capsys, ["segment", "--test-signal", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("start,end,a,b")
    assert len(lines) == 5


def test_segment_entropy_svg(tmp_path, capsys):
    svg = tmp_path / "seg.svg"
    code, out, _ = _run(capsys, ["segment", "--test-signal", "--entropy", "--svg", str(svg)])
    assert code == 0
    jsonschema.validate(json.loads(out), schemas.SEGMENT_REPORT)
    text = svg.read_text()
    assert "<svg" in text
    # self-contained: only inline data or in-document references
    for href in re.findall(r'href="([^"]*)"', text):
        assert href.startswith(("data:", "#"))


def test_segment_cap_is_domain_error(tmp_path, capsys):
    path = _write(tmp_path, index_signal(np.random.default_rng(0).standard_normal(40)))
    code, out, err = _run(capsys, ["segment", path, "--r2", "0.999", "--max-lines", "2"])
    assert code == 1
    assert "error" in err
    assert len(json.loads(out)["segments"]) == 2


def test_entropy_constant(tmp_path, capsys):
    path = _write(tmp_path, index_signal(np.full(9, 4.2)))
    code, out, err = _run(capsys, ["entropy", path])
    assert code == 0
    s = read_signal_csv(io.StringIO(out))
    assert np.all(s.y == 0)
    jsonschema.validate(json.loads(err.strip().splitlines()[-1]), schemas.ENTROPY_STATS)


def test_entropy_stats_file(tmp_path, capsys):
    stats = tmp_path / "stats.json"
    out = tmp_path / "h.csv"
    code, _, _ = _run(capsys, ["entropy", "--test-signal", "--stats", str(stats), "--out", str(out),
                               "--quiet"])
    assert code == 0
    blob = json.loads(stats.read_text())
    jsonschema.validate(blob, schemas.ENTROPY_STATS)
    assert read_signal_csv(out).y[-1] == pytest.approx(4 + 1.8 + 6.2 + 6)


def test_entropy_demo(capsys):
    code, out, _ = _run(capsys, ["entropy", "--demo", "--trials", "20"])
    assert code == 0
    assert json.loads(out)["mean_gap"] <= 0.05


def test_unknown_flag(capsys):
    code, _, err = _run(capsys, ["segment", "--bogus"])
    assert code == 2
    assert "usage" in err


def test_missing_subcommand(capsys):
    assert _run(capsys, [])[0] == 2


@pytest.mark.parametrize("argv", [["fracdim", "x.csv", "--format", "csv"],
                                  ["fbm", "--hurst", "0.5", "--svg", "a.svg"]])
def test_format_misuse(capsys, argv):
    assert _run(capsys, argv)[0] == 2


def test_bad_input_file(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("x,y\n0,1\n0,2\n")
    code, _, err = _run(capsys, ["segment", str(p)])
    assert code == 1 and "error" in err
    assert _run(capsys, ["segment", str(tmp_path / "missing.csv")])[0] == 1


def test_fbm_schedule_and_fracdim(tmp_path, capsys):
    out = tmp_path / "fbm.csv"
    assert _run(capsys, ["fbm", "--schedule", "0.3:64,0.5:64,0.7:64,0.9:64", "--out", str(out)])[0] == 0
    s = read_signal_csv(out)
    assert len(s) == 256 and s.y[0] == 0
    code, txt, _ = _run(capsys, ["fracdim", str(out)])
    assert code == 0
    rep = json.loads(txt)
    jsonschema.validate(rep, schemas.FRACTAL_REPORT)
    assert rep["dimension"] + rep["hurst_est"] == pytest.approx(2)


def test_fbm_requires_hurst(capsys):
    assert _run(capsys, ["fbm"])[0] == 1


def test_fbm_deterministic(capsys):
    a = _run(capsys, ["fbm", "--hurst", "0.7", "--n", "64", "--seed", "5"])[1]
    b = _run(capsys, ["fbm", "--hurst", "0.7", "--n", "64", "--seed", "5"])[1]
    c = _run(capsys, ["fbm", "--hurst", "0.7", "--n", "64", "--seed", "6"])[1]
    assert a == b and a != c


def test_sweep(tmp_path, capsys):
    svg = tmp_path / "sweep.svg"
    code, out, _ = _run(capsys, ["sweep", "--stds", "0,0.5", "--trials", "5", "--svg", str(svg)])
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.SWEEP_REPORT)
    assert rep["rows"][0]["optimal_rm2"] >= 0.998
    assert rep["rows"][1]["optimal_rm2"] is None
    assert svg.exists()


def test_tangent_study(tmp_path, capsys):
    svg = tmp_path / "t.svg"
    code, out, _ = _run(capsys, ["tangent-study", "--hursts", "0.3,0.6,0.9", "--trials", "5",
                                 "--svg", str(svg)])
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.TANGENT_REPORT)
    assert rep["fit"]["b"] < 0
    assert svg.exists()


def test_beam(tmp_path, capsys):
    svg = tmp_path / "beam.svg"
    code, out, _ = _run(capsys, ["beam", "--trials", "3", "--svg", str(svg)])
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.BEAM_REPORT)
    assert rep["nearest_singularity_distance"] <= 2
    assert all(d <= 2 for d in rep["trial_distances"])
    assert "<svg" in svg.read_text()


def test_beam_control(capsys):
    code, out, _ = _run(capsys, ["beam", "--severity", "0"])
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.BEAM_REPORT)
    assert rep["interior_singularities"] == []


def test_beam_bad_severity(capsys):
    assert _run(capsys, ["beam", "--severity", "1.5"])[0] == 1


def test_json_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert _run(capsys, ["segment", "--test-signal", "--out", str(out)])[0] == 0
    jsonschema.validate(json.loads(out.read_text()), schemas.SEGMENT_REPORT)
