import csv
import json

import numpy as np
import pytest

from spdmp import fileio
from spdmp.cli import main
from spdmp.metrics import jbld_dist, log_euclidean_dist


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["gen-demo", "--output", str(d / "demo.json")]) == 0
    assert main(["train", "--input", str(d / "demo.json"), "--output", str(d / "model.json")]) == 0
    assert main(["reproduce", "--input", str(d / "model.json"), "--output", str(d / "traj.json"),
                 "--demo", str(d / "demo.json")]) == 0
    return d


def test_gen_demo_default(workdir):
    times, points = fileio.load_series(workdir / "demo.json")
    assert len(times) == 401 and points.shape == (401, 2, 2)
    rows = read_csv(workdir / "demo.csv")
    assert list(rows[0]) == ["t", "x", "y", "K11", "K22", "K12"]
    assert len(rows) == 401
    assert float(rows[0]["K11"]) == 500.0


def test_gen_demo_zero_rotation(tmp_path):
    out = tmp_path / "c.json"
    assert main(["gen-demo", "--output", str(out), "--theta-end", "0"]) == 0
    _, points = fileio.load_series(out)
    assert np.all(points == points[0])
    assert main(["train", "--input", str(out), "--output", str(tmp_path / "m.json")]) == 0
    weights = np.array(json.loads((tmp_path / "m.json").read_text())["weights"])
    assert np.abs(weights).max() < 1e-6


@pytest.mark.parametrize("value", ["0", "-0.1"])
def test_gen_demo_bad_dt(tmp_path, capsys, value):
    with pytest.raises(SystemExit) as info:
        main(["gen-demo", "--output", str(tmp_path / "x.json"), "--dt", value])
    assert info.value.code == 2
    assert "--dt" in capsys.readouterr().err


def test_train_model_schema(workdir):
    doc = json.loads((workdir / "model.json").read_text())
    for key in ("m", "n", "tau", "alpha_z", "beta_z", "alpha_x", "alpha_g", "N", "centers", "widths",
                "weights", "anchor", "goal", "start", "mandel_convention"):
        assert key in doc
    assert doc["mandel_convention"] == "diag-then-upper-colmajor-sqrt2"
    assert np.array(doc["weights"]).shape == (doc["N"], doc["n"]) == (25, 3)
    assert np.array(doc["anchor"]).shape == (2, 2)


def test_train_missing_input(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["train", "--input", str(tmp_path / "none.json"), "--output", str(tmp_path / "m.json")])
    assert info.value.code == 2


def test_reproduce_report_matches_metrics(workdir):
    rows = read_csv(workdir / "traj_report.csv")
    _, demo = fileio.load_series(workdir / "demo.json")
    _, traj = fileio.load_series(workdir / "traj.json")
    assert len(rows) == len(traj) == 401
    for k in (0, 100, 250, 400):
        assert float(rows[k]["le_demo"]) == pytest.approx(log_euclidean_dist(traj[k], demo[k]), rel=1e-12)
        assert float(rows[k]["jbld_demo"]) == pytest.approx(jbld_dist(traj[k], demo[k]), rel=1e-12,
                                                            abs=1e-15)


def test_reproduce_goal_switch_report(workdir):
    d = workdir
    assert main(["reproduce", "--input", str(d / "model.json"), "--output", str(d / "sw.json"),
                 "--demo", str(d / "demo.json"), "--duration", "12", "--switch-at", "0.5",
                 "--new-goal", "rotate:90"]) == 0
    rows = read_csv(d / "sw_report.csv")
    assert {"d1", "d2"} <= set(rows[0])
    t = np.array([float(r["t"]) for r in rows])
    pre = t < 2.0
    assert all(r["d1"] != "" and r["d2"] == "" for r, p in zip(rows, pre) if p)
    assert all(r["d1"] == "" and r["d2"] != "" for r, p in zip(rows, pre) if not p)
    assert float(rows[-1]["d2"]) < 1e-2


def test_reproduce_same_goal_byte_identical(workdir, tmp_path):
    d = workdir
    assert main(["reproduce", "--input", str(d / "model.json"), "--output", str(tmp_path / "a.json"),
                 "--duration", "8"]) == 0
    assert main(["reproduce", "--input", str(d / "model.json"), "--output", str(tmp_path / "b.json"),
                 "--duration", "8", "--switch-at", "0.5", "--new-goal", "rotate:0"]) == 0
    goal_file = tmp_path / "goal.json"
    goal_file.write_text(json.dumps(json.loads((d / "model.json").read_text())["goal"]))
    assert main(["reproduce", "--input", str(d / "model.json"), "--output", str(tmp_path / "c.json"),
                 "--duration", "8", "--switch-at", "0.5", "--new-goal", str(goal_file)]) == 0
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "c.json").read_bytes()
    # rotate:0 recomputes R^T g R, which may differ from g in the last bit
    np.testing.assert_allclose(fileio.load_series(tmp_path / "b.json")[1],
                               fileio.load_series(tmp_path / "a.json")[1], rtol=1e-12)


def test_reproduce_switch_flags_together(workdir, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["reproduce", "--input", str(workdir / "model.json"), "--output", str(tmp_path / "x.json"),
              "--switch-at", "0.5"])
    assert info.value.code == 2


def test_deterministic_outputs(tmp_path):
    for tag in ("a", "b"):
        assert main(["gen-demo", "--output", str(tmp_path / f"d{tag}.json"), "--duration", "1"]) == 0
        assert main(["train", "--input", str(tmp_path / f"d{tag}.json"),
                     "--output", str(tmp_path / f"m{tag}.json")]) == 0
        assert main(["reproduce", "--input", str(tmp_path / f"m{tag}.json"),
                     "--output", str(tmp_path / f"t{tag}.json")]) == 0
    for name in ("d{}.json", "d{}.csv", "m{}.json", "t{}.json", "t{}_report.csv"):
        assert (tmp_path / name.format("a")).read_bytes() == (tmp_path / name.format("b")).read_bytes()


def test_dist_identical_and_metric(workdir, tmp_path, capsys):
    demo = str(workdir / "demo.json")
    assert main(["dist", demo, demo]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,log-euclidean" and len(lines) == 402
    assert all(float(line.split(",")[1]) == 0.0 for line in lines[1:])
    out = tmp_path / "d.csv"
    assert main(["dist", demo, str(workdir / "traj.json"), "--metric", "jbld", "--output", str(out)]) == 0
    rows = read_csv(out)
    _, a = fileio.load_series(demo)
    _, b = fileio.load_series(workdir / "traj.json")
    assert float(rows[200]["jbld"]) == pytest.approx(jbld_dist(a[200], b[200]), rel=1e-12)


def test_dist_length_mismatch(workdir, tmp_path):
    short = tmp_path / "short.json"
    times, pts = fileio.load_series(workdir / "demo.json")
    fileio.save_series(short, times[:10], pts[:10])
    with pytest.raises(SystemExit) as info:
        main(["dist", str(workdir / "demo.json"), str(short)])
    assert info.value.code == 2


def test_numerical_failure_exit_code(workdir, tmp_path):
    doc = json.loads((workdir / "model.json").read_text())
    doc["weights"] = (np.full((25, 3), 1e14)).tolist()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with np.errstate(all="ignore"):
        assert main(["reproduce", "--input", str(bad), "--output", str(tmp_path / "x.json")]) == 3


def test_malformed_model_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 2}))
    assert main(["reproduce", "--input", str(bad), "--output", str(tmp_path / "x.json")]) == 2
