import json

import pytest

from fracineq.cli import COLUMNS, RunConfig, ConfigError, constant_sample, main

SMALL = {
    "alpha_grid": [0.5, 2.0],
    "rho_grid": [0.5, 2.0],
    "intervals": [[1.0, 2.0]],
    "families": ["quadratic", "piecewise-linear-random"],
    "count_per_family": 1,
    "weight_count": 2,
    "limit_alphas": [0.5],
    "limit_kmax": 8,
    "limit_threshold": 1e-2,
}


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_eval_examples(capsys):
    assert main(["eval", "katugampola", "left", "--alpha", "0.5", "--rho", "2", "--a", "0",
                 "--x", "1", "--function", "const1"]) == 0
    assert "value=0.79788456" in capsys.readouterr().out
    assert main(["eval", "hadamard", "left", "--alpha", "1", "--a", "1",
                 "--x", "7.38905609893065"]) == 0
    assert "value=2.0000000000" in capsys.readouterr().out


def test_eval_domain_error_exit_code(capsys):
    assert main(["eval", "riemann-liouville", "left", "--alpha", "0.5", "--a", "1", "--x", "1"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and err.count("\n") == 1
    assert main(["eval", "riemann-liouville", "left", "--alpha", "0.5", "--a", "0", "--x", "1",
                 "--function", "nope"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "katugampola"])
    assert exc.value.code == 2


def test_verify_writes_report_and_is_deterministic(tmp_path, capsys):
    cfg = write(tmp_path, SMALL)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["verify", "--config", cfg, "--out", str(out1), "--jobs", "1"]) == 0
    summary = capsys.readouterr().out
    assert "fail=0" in summary and "constant=without-alpha" in summary
    assert main(["verify", "--config", cfg, "--out", str(out2), "--jobs", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    header = [l for l in lines if l.startswith("#")]
    assert any('"without-alpha"' in l for l in header) and any("seed" in l for l in header)
    assert lines[len(header)] == ",".join(COLUMNS)


def test_verify_json_and_suite_filter(tmp_path):
    cfg = write(tmp_path, {**SMALL, "suites": ["limits"], "format": "json"})
    out = tmp_path / "r.json"
    assert main(["verify", "--config", cfg, "--out", str(out), "--jobs", "1"]) == 0
    rep = json.loads(out.read_text())
    assert rep["header"]["version"] and rep["rows"]
    assert {r["suite"] for r in rep["rows"]} == {"limits"}
    assert list(rep["rows"][0]) == list(COLUMNS)


def test_verify_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["verify", "--config", str(bad)]) == 4
    assert main(["verify", "--config", write(tmp_path, {"tol": 1.0}, "t.json")]) == 4
    assert main(["verify", "--config", write(tmp_path, {"suites": ["x"]}, "s.json")]) == 4
    assert main(["verify", "--config", write(tmp_path, {"alpha_grid": []}, "g.json")]) == 4
    assert main(["verify", "--config", write(tmp_path, {"colour": 1}, "k.json")]) == 4


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    import fracineq.cli as cli
    from fracineq.inequalities import InequalityVerdict

    monkeypatch.setattr(cli, "hh_katugampola",
                        lambda *a, **k: InequalityVerdict(1.0, 0.0, 2.0, 1e-7))
    cfg = write(tmp_path, {**SMALL, "suites": ["hh2"]})
    assert main(["verify", "--config", cfg, "--out", str(tmp_path / "f.csv"), "--jobs", "1"]) == 3


def test_limits_command(capsys):
    assert main(["limits", "--function", "const1", "--a", "1", "--b", "2", "--alpha", "0.5",
                 "--k-max", "10"]) == 0
    out = capsys.readouterr().out.splitlines()
    rows = [l for l in out if l[:1].isdigit()]
    assert len(rows) == 10
    devs = [float(r.split(",")[2]) for r in rows]
    assert all(b <= a for a, b in zip(devs[2:], devs[3:]))
    assert float(out[0].split("=")[-1]) <= 2e-10
    assert main(["limits", "--a", "0", "--alpha", "0.5", "--target", "hadamard"]) == 2


def test_constant_command(capsys):
    assert main(["constant"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("without-alpha") and "with-alpha,without-alpha" in out
    assert main(["constant", "--linear-only"]) == 3
    assert "ambiguous" in capsys.readouterr().out


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_constant_verdict_stable_across_seeds(seed, capsys):
    assert main(["constant", "--seed", str(seed)]) == 0
    assert capsys.readouterr().out.strip().endswith("without-alpha")


def test_corpus_command(tmp_path):
    cfg = write(tmp_path, SMALL)
    out = tmp_path / "m.jsonl"
    assert main(["corpus", "--config", cfg, "--out", str(out)]) == 0
    recs = [json.loads(l) for l in out.read_text().splitlines()]
    assert len(recs) == 2 and {r["family"] for r in recs} == {"quadratic", "piecewise-linear-random"}


def test_run_config_roundtrip():
    cfg = RunConfig.from_dict(SMALL)
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError):
        RunConfig(format="xml")
    assert len(constant_sample(4)) == 8
