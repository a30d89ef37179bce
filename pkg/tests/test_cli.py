import pytest

from reproforge.cli import main
from reproforge.resources import SCENARIO_DIR


def test_extract_fig1(tmp_path, capsys):
    out = tmp_path / "s2rs.yaml"
    assert main(["extract", "--scenario", "fig1", "--out", str(out)]) == 0
    text = out.read_text()
    assert "summary:\n  sentences: 1\n  standalone: 4\n  s2rs: 4\n  warnings: 0" in text


def test_extract_empty_report(tmp_path):
    report = tmp_path / "empty.txt"
    report.write_text("")
    assert main(["extract", "--report", str(report), "--out", str(tmp_path / "o.yaml")]) == 0


def test_extract_warning_exit_code(tmp_path):
    report = tmp_path / "r.txt"
    report.write_text("Tap OK. Colorless green ideas sleep furiously furiously the.")
    assert main(["extract", "--report", str(report), "--out", str(tmp_path / "o.yaml")]) == 2


def test_missing_file_is_an_error(tmp_path):
    assert main(["extract", "--report", str(tmp_path / "nope.txt")]) > 2


def test_usage_error_is_not_warning_code():
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--policy", "x"])
    assert exc.value.code > 2


def test_reproduce_and_replay(tmp_path):
    assert main(["reproduce", "--scenario", "exact_steps", "--out", str(tmp_path)]) == 0
    trace = tmp_path / "trace.yaml"
    assert (tmp_path / "extraction.yaml").exists()
    model = SCENARIO_DIR / "exact_steps" / "app.yaml"
    assert main(["replay", "--trace", str(trace), "--app-model", str(model),
                 "--out", str(tmp_path / "v.yaml")]) == 0
    assert "verdict: reproduced" in (tmp_path / "v.yaml").read_text()


def test_replay_with_deleted_event(tmp_path):
    main(["reproduce", "--scenario", "exact_steps", "--out", str(tmp_path)])
    trace = tmp_path / "trace.yaml"
    text = trace.read_text()
    first = text.index("- index: 0")
    second = text.index("- index: 1")
    (tmp_path / "cut.yaml").write_text(text[:first] + text[second:])
    code = main(["replay", "--trace", str(tmp_path / "cut.yaml"), "--scenario", "exact_steps",
                 "--out", str(tmp_path / "v.yaml")])
    assert code == 1
    verdict = (tmp_path / "v.yaml").read_text()
    assert "not reproduced" in verdict and "diverging_index: 0" in verdict


def test_replay_against_other_model(tmp_path):
    main(["reproduce", "--scenario", "exact_steps", "--out", str(tmp_path)])
    code = main(["replay", "--trace", str(tmp_path / "trace.yaml"), "--scenario", "greedy_trap",
                 "--out", str(tmp_path / "v.yaml")])
    assert code == 1


def test_greedy_policy_fails_on_trap(tmp_path):
    assert main(["reproduce", "--scenario", "greedy_trap", "--policy", "greedy", "--out", str(tmp_path)]) == 1


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("schema_version: 1\nhyperparams: {n0: 0}\n")
    monkeypatch.setenv("REPROFORGE_CONFIG", str(cfg))
    assert main(["reproduce", "--scenario", "missing_step", "--episodes", "50", "--out", str(tmp_path)]) == 1
    # flags beat the config file
    assert main(["reproduce", "--scenario", "missing_step", "--noop-budget", "1", "--out", str(tmp_path)]) == 0


def test_bad_config(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("schema_version: 1\nbogus: 1\n")
    assert main(["extract", "--scenario", "fig1", "--config", str(cfg)]) > 2


def test_bench_empty_dir(tmp_path, capsys):
    assert main(["bench", "--corpus", str(tmp_path)]) == 0
    assert capsys.readouterr().out == ""


def test_bench_default(tmp_path, capsys):
    assert main(["bench", "--seeds", "0", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "precision=1.000" in out and "exact_steps" in out
    assert (tmp_path / "bench.yaml").exists()
