import csv
import json

import numpy as np
import pytest

from cornergrowth.cli import EXIT_CODES, EXIT_USAGE, RunConfig, main
from cornergrowth.lpp import read_pgm
from cornergrowth.presets import PRESETS, preset

HOMOG = {"a": {"kind": "RowConstant", "cap": 300, "values": "0.5"},
         "b": {"kind": "RowConstant", "cap": 300, "values": "0.5"}}


def run_cfg(tmp_path, cfg, *flags, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    out = tmp_path / (name + ".out")
    code = main(["--config", str(p), "--out", str(out), "--threads", "1", *flags])
    return code, out


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_empty_invocation_prints_usage(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_unknown_preset(tmp_path, capsys):
    assert main(["--preset", "nope", "--out", str(tmp_path)]) == EXIT_CODES["config"]
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "config"


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad)]) == EXIT_CODES["config"]
    assert main(["--config", str(tmp_path / "missing.json")]) == EXIT_CODES["io"]
    code, _ = run_cfg(tmp_path, {"command": "centering", "grid": "2x2", "bogus": 1})
    assert code == EXIT_CODES["config"]


def test_error_codes_map_exceptions(tmp_path):
    neg = {"a": {"kind": "RowConstant", "cap": 5, "values": -1.0}, "b": {"kind": "RowConstant", "cap": 5, "values": 0.5}}
    code, _ = run_cfg(tmp_path, {"command": "centering", "params": neg, "grid": "2x2"}, name="neg.json")
    assert code == EXIT_CODES["invalid-parameters"]
    small = {"a": {"kind": "RowConstant", "cap": 20, "values": 0.5}, "b": {"kind": "RowConstant", "cap": 20, "values": 0.5}}
    code, _ = run_cfg(tmp_path, {"command": "tasep", "params": small, "t": 1e5}, name="ext.json")
    assert code == EXIT_CODES["insufficient-extent"]
    code, _ = run_cfg(tmp_path, {"command": "centering", "params": HOMOG, "grid": "400x2"}, name="rng.json")
    assert code == EXIT_CODES["range"]


def test_presets_expand():
    assert set(PRESETS) == {"rost", "fig1b", "fig1c", "fig1d", "rains-squares"}
    cfg = RunConfig.from_dict(preset("fig1d"))
    pp = cfg.param_pair()
    assert pp.a.value(60, 50) == -0.25 and pp.a.value(100, 50) == 0.5
    assert pp.a.value(100, 100) == 0.0 and pp.a.value(99, 99) == 0.5
    pp = RunConfig.from_dict(preset("fig1c")).param_pair()
    assert pp.a.value(4000, 50) + pp.b.value(4000, 1) == 0.75
    assert pp.a.value(4000, 100) + pp.b.value(4000, 1) == 0.5


def test_shape_preset_fig1b(tmp_path):
    out = tmp_path / "o"
    assert main(["shape", "--preset", "fig1b", "--out", str(out)]) == 0
    rows = read_csv(out / "boundary.csv")
    spike = [(float(r["x"]), float(r["y"])) for r in rows if r["kind"] == "spike_v"]
    assert spike == [(0.0, 0.5), (0.0, 1.0)]
    flat = [(float(r["x"]), float(r["y"])) for r in rows if r["kind"] == "flat_v"]
    assert flat[0] == (0.0, 0.5) and flat[1] == pytest.approx((0.25, 0.25))
    g = read_csv(out / "gamma.csv")
    assert {r["region"] for r in g} == {"FlatV", "Curved"}
    man = json.loads((out / "run.json").read_text())
    assert set(man["artifacts"]) == {"boundary.csv", "gamma.csv"}


def test_centering_with_string_numbers(tmp_path):
    cfg = {"command": "centering", "params": HOMOG, "options": {"points": [[2, 1], [10, 10]]}}
    code, out = run_cfg(tmp_path, cfg)
    assert code == 0
    rows = read_csv(out / "centering.csv")
    assert float(rows[0]["M"]) == pytest.approx(3 + 2 * 2**0.5, abs=1e-10)
    assert float(rows[1]["M"]) == pytest.approx(40.0)


def test_simulate_and_replay(tmp_path):
    out1 = tmp_path / "a"
    args = ["simulate", "--preset", "fig1b", "--grid", "300x300", "--t", "80", "--seed", "7"]
    assert main(args + ["--out", str(out1), "--threads", "1"]) == 0
    out2 = tmp_path / "b"
    assert main(args + ["--out", str(out2), "--threads", "4"]) == 0
    m1 = (out1 / "run.json").read_bytes()
    assert m1 == (out2 / "run.json").read_bytes()
    man = json.loads(m1)
    assert set(man["artifacts"]) == {"cluster.pgm", "cluster_rle.csv", "boundary.csv"}
    assert man["seed"] == 7 and "G" in man["grid_checksums"]
    cells = read_pgm(out1 / "cluster.pgm")
    assert cells.shape == (300, 300) and cells.sum() == man["summary"]["cluster_cells"]
    out3 = tmp_path / "c"
    assert main(["--config", str(out1 / "run.json"), "--out", str(out3)]) == 0
    assert (out3 / "run.json").read_bytes() == m1


def test_flags_override_presets(tmp_path):
    out = tmp_path / "o"
    assert main(["simulate", "--preset", "rost", "--grid", "50x40", "--t", "5", "--out", str(out)]) == 0
    man = json.loads((out / "run.json").read_text())
    assert man["config"]["grid"] == [50, 40] and man["config"]["t"] == 5.0
    assert man["config"]["preset"] == "rost"


def test_tasep_command(tmp_path):
    cfg = {"command": "tasep", "params": {"a": {"kind": "RowConstant", "cap": 3000, "values": 0.5},
                                           "b": {"kind": "RowConstant", "cap": 3000, "values": 0.5}},
           "options": {"times": ["0", "100", "400"], "particles": [1, 100], "sites": [1, 50]}}
    code, out = run_cfg(tmp_path, cfg)
    assert code == 0
    h = read_csv(out / "height.csv")
    assert [(r["t"], r["n"], r["H"], r["sigma"]) for r in h][:2] == [("0.0", "1", "0", "0"), ("0.0", "100", "0", "-99")]
    f = read_csv(out / "flux.csv")
    assert len(f) == 6


@pytest.mark.parametrize("cfg", [
    {"command": "verify-burke", "params": HOMOG, "grid": "20x20", "replicas": 2000, "options": {"z": [0.0, 0.2]}},
    {"command": "verify-permutation", "params": {"a": {"kind": "RowConstant", "values": [0.3, 0.7, 0.5]},
                                                 "b": {"kind": "RowConstant", "values": [0.5, 0.5, 0.5]}},
     "grid": "3x3", "replicas": 5000,
     "options": {"permuted": {"a": {"kind": "RowConstant", "values": [0.5, 0.3, 0.7]},
                              "b": {"kind": "RowConstant", "values": [0.5, 0.5, 0.5]}}}},
    {"command": "verify-tails", "params": HOMOG, "grid": "50x50", "replicas": 1000},
    {"command": "verify-exit", "params": HOMOG, "grid": "50x50", "replicas": 300},
    {"command": "verify-limitshape", "params": HOMOG, "grid": "300x300", "shape": PRESETS["rost"]["shape"],
     "options": {"times": [50, 100], "h": 0.011, "tolerance": 0.3}},
    {"command": "verify-expsum", "replicas": 2000},
    {"command": "rains", "options": {"n": 10, "blocks": 10, "terms": 1000, "tail_bound": 0.0021}},
], ids=lambda c: c["command"])
def test_verify_commands(tmp_path, cfg):
    code, out = run_cfg(tmp_path, cfg)
    assert code == 0
    verdicts = json.loads((out / "verdicts.json").read_text())
    assert verdicts and all(set(v) == {"check", "statistic", "threshold", "pass"} for v in verdicts)
    man = json.loads((out / "run.json").read_text())
    assert man["pass"] == all(v["pass"] for v in verdicts)
    assert "verdicts.json" in man["artifacts"]


def test_permutation_negative_control_cli(tmp_path):
    cfg = {"command": "verify-permutation", "grid": "3x3",
           "params": {"a": {"kind": "RowConstant", "values": [0.3, 0.7, 0.5]},
                      "b": {"kind": "RowConstant", "values": [0.5, 0.5, 0.5]}},
           "options": {"permuted": {"a": {"kind": "RowConstant", "values": [0.3, 0.7, 0.2]},
                                    "b": {"kind": "RowConstant", "values": [0.5, 0.5, 0.5]}}}}
    code, _ = run_cfg(tmp_path, cfg, name="strict.json")
    assert code == EXIT_CODES["invalid-parameters"]
    cfg["options"]["strict"] = False
    code, out = run_cfg(tmp_path, cfg, name="loose.json")
    assert code == 0
    assert json.loads((out / "run.json").read_text())["pass"] is False


def test_config_digest_ignores_output_location():
    a = RunConfig.from_dict({"command": "centering", "grid": "2x2", "out": "x"})
    b = RunConfig.from_dict({"command": "centering", "grid": [2, 2], "out": "y", "seed": "0"})
    assert a.digest() == b.digest()
    assert a.digest() != RunConfig.from_dict({"command": "centering", "grid": "2x3"}).digest()
