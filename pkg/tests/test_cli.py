import json
from pathlib import Path

import pytest

from torusgg.cli import main
from torusgg.config import ConfigError, load_config

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_predict_edge_example(capsys):
    code, out, _ = run_cli(capsys, "predict", "--functional", "subgraph:0-1",
                           "--d", "5", "--b", "20", "--lambda", "0.25", "--t", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["rho"] == pytest.approx(97.65625, rel=1e-9)
    assert doc["mean"] == pytest.approx(48.828125, rel=1e-9)
    assert doc["k0"] == 1
    assert doc["v_max"] == "2/1"
    assert doc["time_change"] == 1.0


def test_predict_betti_example(capsys):
    code, out, _ = run_cli(capsys, "predict", "--functional", "betti:q=1",
                           "--d", "4", "--b", "10", "--lambda", "0.35")
    assert code == 0
    doc = json.loads(out)
    assert doc["k0"] == 3
    assert doc["v_max"] == "16/3"
    assert len(doc["A_m"]) == 3


def test_predict_missing_flag_exits_2(capsys):
    code, _, _ = run_cli(capsys, "predict", "--functional", "subgraph:0-1",
                         "--d", "5", "--b", "20")
    assert code == 2


def test_predict_bad_functional_exits_2(capsys):
    code, _, err = run_cli(capsys, "predict", "--functional", "bogus:1",
                           "--d", "5", "--b", "20", "--lambda", "0.25")
    assert code == 2
    assert "error" in err


def test_vexact_examples(capsys):
    code, out, _ = run_cli(capsys, "vexact", "0-1,1-2,2-0")
    assert code == 0
    assert json.loads(out)["v"] == "3/1"
    code, out, _ = run_cli(capsys, "vexact", "0-1,1-2,2-3,3-0")
    assert code == 0
    assert json.loads(out)["v"] == "16/3"


def test_vexact_disconnected_exits_2(capsys):
    code, _, err = run_cli(capsys, "vexact", "n=3;0-1")
    assert code == 2
    assert "error" in err


def test_euler_regime_cli(capsys):
    code, out, _ = run_cli(capsys, "euler-regime", "--d", "10", "--t", "1",
                           "--delta", "0.1", "--epsilon", "0.05")
    assert code == 0
    doc = json.loads(out)
    assert doc["dominant_k"] == 0
    assert doc["chi_approx"]["regime"] == "low"
    code, _, _ = run_cli(capsys, "euler-regime", "--d", "10", "--t", "1",
                         "--delta", "0.3", "--epsilon", "0.05")
    assert code == 2  # delta outside (0, 1/4)


def test_help_mentions_every_flag(capsys):
    for sub, flags in [("predict", ["--functional", "--d", "--b", "--lambda",
                                    "--t", "--t-prime", "--K", "--convention"]),
                       ("simulate", ["config", "--out-dir"]),
                       ("verify", ["config", "--out-dir"]),
                       ("vexact", ["graph"]),
                       ("euler-regime", ["--d", "--t", "--delta", "--epsilon",
                                         "--k"])]:
        code = main([sub, "--help"])
        out, _ = capsys.readouterr()
        assert code == 0
        for flag in flags:
            assert flag in out, (sub, flag)


def write_config(tmp_path, text):
    path = tmp_path / "exp.ini"
    path.write_text(text)
    return str(path)


MINI = """
[experiment]
schema_version = 1
functional = subgraph:0-1
d = 2
b = 8.0
lambda = 0.4
t_grid = 0.5, 1.0
replications = 40
master_seed = 7
"""


def test_load_config_roundtrip(tmp_path):
    spec = load_config(write_config(tmp_path, MINI))
    assert spec.experiment.window.d == 2
    assert spec.experiment.t_grid == (0.5, 1.0)
    assert spec.checks == ()


def test_load_config_rejects_unknown_keys(tmp_path):
    bad = MINI + "typo_key = 3\n"
    with pytest.raises(ConfigError, match="unknown experiment keys"):
        load_config(write_config(tmp_path, bad))


def test_load_config_requires_schema_version(tmp_path):
    bad = MINI.replace("schema_version = 1\n", "")
    with pytest.raises(ConfigError, match="missing experiment keys"):
        load_config(write_config(tmp_path, bad))
    bad = MINI.replace("schema_version = 1", "schema_version = 99")
    with pytest.raises(ConfigError, match="unsupported"):
        load_config(write_config(tmp_path, bad))


def test_simulate_writes_deterministic_artifacts(tmp_path, capsys):
    cfg = write_config(tmp_path, MINI)
    out1 = tmp_path / "out1"
    out2 = tmp_path / "out2"
    assert run_cli(capsys, "simulate", cfg, "--out-dir", str(out1))[0] == 0
    assert run_cli(capsys, "simulate", cfg, "--out-dir", str(out2))[0] == 0
    raw1 = (out1 / "raw.csv").read_bytes()
    raw2 = (out2 / "raw.csv").read_bytes()
    assert raw1 == raw2
    lines = raw1.decode().strip().splitlines()
    assert lines[0] == "replication,t,value"
    assert len(lines) == 1 + 40 * 2
    rep, t, value = lines[1].split(",")
    assert rep == "0" and float(t) == 0.5 and float(value) >= 0.0
    report = json.loads((out1 / "report.json").read_text())
    assert report["experiment"]["functional"] == "subgraph:0-1"
    assert "moments" in report


def test_simulate_nonascending_grid_exits_2(tmp_path, capsys):
    bad = MINI.replace("t_grid = 0.5, 1.0", "t_grid = 1.0, 0.5")
    code, _, err = run_cli(capsys, "simulate", write_config(tmp_path, bad),
                           "--out-dir", str(tmp_path / "o"))
    assert code == 2


def test_simulate_missing_config_exits_2(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "simulate", str(tmp_path / "nope.ini"),
                         "--out-dir", str(tmp_path / "o"))
    assert code == 2


def test_verify_mecke_config_passes(tmp_path, capsys):
    text = MINI.replace("d = 2", "d = 3").replace("b = 8.0", "b = 10.0") \
               .replace("lambda = 0.4", "lambda = 0.3") \
               .replace("replications = 40", "replications = 400")
    text += "\n[check:oracle]\ntype = mecke_mean\npattern = 0-1\nci_multiple = 4\n"
    code, out, _ = run_cli(capsys, "verify", write_config(tmp_path, text))
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["checks"][0]["type"] == "mecke_mean"


def test_verify_wrong_convention_fails_named(tmp_path, capsys):
    # small but decisive run; as_printed declared but data matches poisson_consistent
    text = """
[experiment]
schema_version = 1
functional = subgraph:0-1
d = 4
b = 21.27458
lambda = 0.25
t_grid = 1.0
replications = 4000
master_seed = 77
convention = as_printed

[check:discriminate]
type = variance_convention
band = 0.2
"""
    code, out, _ = run_cli(capsys, "verify", write_config(tmp_path, text))
    assert code == 1
    doc = json.loads(out)
    assert doc["pass"] is False
    check = doc["checks"][0]
    assert check["name"] == "discriminate"
    assert check["winners"] == ["poisson_consistent"]


def test_verify_no_checks_exits_2(tmp_path, capsys):
    code, _, err = run_cli(capsys, "verify", write_config(tmp_path, MINI))
    assert code == 2
    assert "no checks" in err


def test_shipped_configs_parse():
    for name in ("mecke_edge_d3.ini", "convention_discrimination.ini",
                 "pbetti_schedule.ini", "fclt_edge_process.ini"):
        spec = load_config(str(CONFIG_DIR / name))
        assert spec.experiment.replications > 0


def test_verify_fclt_config_small(tmp_path, capsys):
    # the shipped fclt config at reduced replication count still passes
    text = (CONFIG_DIR / "fclt_edge_process.ini").read_text()
    text = text.replace("replications = 3000", "replications = 400")
    code, out, _ = run_cli(capsys, "verify", write_config(tmp_path, text))
    assert code == 0
    doc = json.loads(out)
    assert [c["type"] for c in doc["checks"]] == ["fclt", "cov_ratio", "chentsov"]
