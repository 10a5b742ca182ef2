"""In-process runs of the command line front end.

Each test drives `main` with a temp output path and inspects the file,
so the column contracts and the config plumbing stay pinned.
"""

import json
import math
import pathlib

import pytest

from bowenpress.cli import main
from bowenpress.config import load_config
from bowenpress.harness import BASELINE_COLUMNS, VP_COLUMNS
from bowenpress.systems import cylinder_length

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"
LOG2 = math.log(2.0)


def run(*argv):
    rc = main([str(a) for a in argv])
    assert rc == 0 or rc is None
    return rc


def read_json(path):
    return json.loads(pathlib.Path(path).read_text())


def read_csv(path):
    lines = pathlib.Path(path).read_text().splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, ln.split(","))) for ln in lines[1:]]


# ---------------------------------------------------------------------------
# pressure / weighted


def test_pressure_json_entropy_config(tmp_path):
    out = tmp_path / "p.json"
    run("pressure", "--config", CONFIGS / "full_shift_entropy.ini",
        "--out", out)
    payload = read_json(out)
    want = cylinder_length(20, 0.1) / 20 * LOG2
    assert payload["critical_s"] == pytest.approx(want, abs=1e-9)
    assert payload["big_n"] == 20
    assert payload["epsilon"] == 0.1
    assert payload["bracket"][0] <= payload["critical_s"] <= payload["bracket"][1]


def test_pressure_flags_override_run_section(tmp_path):
    out = tmp_path / "p.json"
    run("pressure", "--config", CONFIGS / "full_shift_entropy.ini",
        "--eps", "0.25", "--big-n", "8", "--out", out)
    payload = read_json(out)
    want = cylinder_length(8, 0.25) / 8 * LOG2
    assert payload["epsilon"] == 0.25
    assert payload["critical_s"] == pytest.approx(want, abs=1e-9)


def test_pressure_csv_cost_curve(tmp_path):
    out = tmp_path / "curve.csv"
    run("pressure", "--config", CONFIGS / "full_shift_entropy.ini",
        "--format", "csv", "--out", out)
    header, rows = read_csv(out)
    assert header == ["s", "cost"]
    s_values = [float(r["s"]) for r in rows]
    costs = [float(r["cost"]) for r in rows]
    assert s_values == sorted(s_values)
    assert costs == sorted(costs, reverse=True)


def test_weighted_root_matches_pressure_root(tmp_path):
    """Laminar ball families: the relaxation moves no root."""
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run("pressure", "--config", CONFIGS / "golden_mean.ini", "--out", a)
    run("weighted", "--config", CONFIGS / "golden_mean.ini", "--out", b)
    assert read_json(a)["critical_s"] == read_json(b)["critical_s"]


def test_weighted_at_fixed_s_reports_both_costs(tmp_path):
    out = tmp_path / "w.json"
    run("weighted", "--config", CONFIGS / "golden_mean.ini",
        "--s", "0.3", "--out", out)
    payload = read_json(out)
    assert payload["s"] == 0.3
    assert payload["weighted_cost"] == payload["cover_cost"]
    assert payload["weighted_cost"] > 0


# ---------------------------------------------------------------------------
# katok / bk


def test_katok_json_sits_below_cover(tmp_path):
    k = tmp_path / "k.json"
    p = tmp_path / "p.json"
    run("katok", "--config", CONFIGS / "golden_mean.ini", "--out", k)
    run("pressure", "--config", CONFIGS / "golden_mean.ini", "--out", p)
    kat = read_json(k)
    assert kat["delta"] == 0.5
    assert kat["lower_root"] <= kat["critical_s"] + 1e-12
    assert kat["critical_s"] <= read_json(p)["critical_s"] + 1e-9
    assert len(kat["bracket"]) == 2


def test_katok_requires_a_measure_section(tmp_path):
    cfg = tmp_path / "bare.ini"
    cfg.write_text(
        "[system]\nkind = shift\nalphabet_size = 2\n\n"
        "[potential]\nkind = additive\nvalues = 0.0;0.0\n"
    )
    with pytest.raises(SystemExit):
        main(["katok", "--config", str(cfg)])


def test_bk_json_uniform_window_reading(tmp_path):
    out = tmp_path / "bk.json"
    run("bk", "--config", CONFIGS / "full_shift_entropy.ini",
        "--eps", "0.5", "--n-max", "60", "--samples", "3", "--out", out)
    payload = read_json(out)
    lo, hi = payload["window"]
    want = min(
        cylinder_length(n, 0.5) / n * LOG2 for n in range(lo, hi + 1)
    )
    # uniform mass makes every orbit read the same trace
    assert payload["mean"] == pytest.approx(want, rel=1e-12)
    assert payload["stderr"] <= 1e-13
    assert payload["infinite_samples"] == 0
    assert len(payload["samples"]) == 3


def test_bk_csv_trace_shape(tmp_path):
    out = tmp_path / "trace.csv"
    run("bk", "--config", CONFIGS / "full_shift_entropy.ini",
        "--n-max", "60", "--samples", "2", "--format", "csv", "--out", out)
    header, rows = read_csv(out)
    assert header == ["sample", "order", "value", "in_window"]
    assert {r["sample"] for r in rows} == {"0", "1"}
    assert len(rows) == 2 * (60 - 20 + 1)
    assert {r["in_window"] for r in rows} == {"true", "false"}


# ---------------------------------------------------------------------------
# frostman


def test_frostman_json_certificate(tmp_path):
    out = tmp_path / "f.json"
    run("frostman", "--config", CONFIGS / "full_shift_pressure.ini",
        "--s", "0.9", "--eps", "0.25", "--big-n", "4", "--depth", "6",
        "--exact", "--out", out)
    payload = read_json(out)
    assert payload["bound_holds"] is True
    assert payload["bound_max_ratio"] == pytest.approx(1.0, rel=1e-12)
    assert payload["flow_value"] > 0
    assert payload["depth"] == 6
    assert payload["exact"] is True


def test_frostman_csv_masses(tmp_path):
    out = tmp_path / "masses.csv"
    run("frostman", "--config", CONFIGS / "full_shift_pressure.ini",
        "--s", "0.9", "--eps", "0.25", "--big-n", "4", "--depth", "6",
        "--format", "csv", "--out", out)
    header, rows = read_csv(out)
    assert header == ["word", "mass"]
    deepest = [float(r["mass"]) for r in rows if len(r["word"]) == 6]
    assert len(deepest) == 64
    assert sum(deepest) == pytest.approx(1.0, abs=1e-12)
    root = [r for r in rows if r["word"] == ""]
    assert len(root) == 1 and float(root[0]["mass"]) == 1.0


# ---------------------------------------------------------------------------
# distortion


def test_distortion_json_verdicts(tmp_path):
    a = tmp_path / "shift.json"
    b = tmp_path / "circle.json"
    run("distortion", "--config", CONFIGS / "full_shift_pressure.ini",
        "--out", a)
    run("distortion", "--config", CONFIGS / "circle_cosine.ini",
        "--eps-grid", "0.1;0.2", "--n-grid", "4;8", "--out", b)
    assert read_json(a)["verdict"] == "tempered (exact)"
    assert read_json(b)["verdict"].startswith("tempered")


def test_distortion_csv_grid(tmp_path):
    out = tmp_path / "d.csv"
    run("distortion", "--config", CONFIGS / "circle_cosine.ini",
        "--eps-grid", "0.1;0.2", "--n-grid", "4;8", "--format", "csv",
        "--out", out)
    header, rows = read_csv(out)
    assert header == ["n", "epsilon", "upper", "lower", "upper_over_n"]
    assert len(rows) == 4
    for r in rows:
        assert float(r["upper"]) >= float(r["lower"]) >= 0.0


# ---------------------------------------------------------------------------
# vp-check / baselines


def test_vp_check_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "vp.csv"
    jout = tmp_path / "vp.json"
    run("vp-check", "--config", CONFIGS / "full_shift_entropy.ini",
        "--eps-grid", "0.1;0.2;0.25", "--samples", "3", "--n-max", "60",
        "--family-grid", "3", "--refine-rounds", "0",
        "--out", out, "--json-out", jout)
    text = capsys.readouterr().out
    assert "FAIL" not in text
    assert text.count("PASS") >= 8
    header, rows = read_csv(out)
    assert header == list(VP_COLUMNS)
    assert len(rows) == 3
    extrap = tmp_path / "vp_extrapolation.csv"
    assert extrap.exists()
    payload = read_json(jout)
    assert len(payload["rows"]) == 3
    assert payload["config"]["bk_samples"] == 3


def test_baselines_csv(tmp_path):
    out = tmp_path / "b.csv"
    run("baselines", "--out", out)
    header, rows = read_csv(out)
    assert header == list(BASELINE_COLUMNS)
    assert len(rows) == 35


# ---------------------------------------------------------------------------
# config loading


def test_golden_markov_initial_is_stationary():
    spec = load_config(str(CONFIGS / "golden_mean.ini"))
    init = spec.measure.initial
    assert init[0] == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert init[1] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_missing_config_file_errors():
    with pytest.raises(FileNotFoundError):
        main(["pressure", "--config", "/nonexistent/x.ini"])


def test_config_without_system_section_errors(tmp_path):
    cfg = tmp_path / "broken.ini"
    cfg.write_text("[potential]\nkind = additive\nvalues = 0.0\n")
    with pytest.raises(KeyError):
        main(["pressure", "--config", str(cfg)])
