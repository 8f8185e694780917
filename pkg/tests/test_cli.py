from __future__ import annotations

import json
from pathlib import Path

import pytest

from weilvhs import cli

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_CASES = {
    "weil_n2_qi.json": ["--n", "2", "--e", "1", "--p", "2"],
    "cy3_q_sqrt_m3.json": ["--n", "3", "--e", "3", "--p", "3"],
    "n3_q_sqrt2_p31.json": ["--n", "3", "--m", "2", "--e", "1", "--p", "3,1"],
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_examples(capsys):
    code, out, _ = run(capsys, "construct", "--n", "2", "--e", "1", "--p", "2")
    assert code == 0
    assert "h = diag(-1, -1, 1, 1)" in out and "(2, 2)" in out and "disc(h) = 1" in out
    code, out, _ = run(capsys, "construct", "--n", "3", "--m", "2", "--e", "1", "--p", "3,1")
    assert code == 0 and "sigma_2: (1, 5)" in out


def test_construct_parity_violation(capsys):
    code, out, err = run(capsys, "construct", "--n", "3", "--e", "1", "--p", "2")
    assert code == 2 and out == "" and "parity" in err


def test_construct_override_reports_failure(capsys):
    code, out, _ = run(capsys, "construct", "--n", "2", "--p", "1", "--override-weil")
    assert code == 1 and "violation" in out


def test_hodge_examples(capsys):
    code, out, _ = run(capsys, "hodge", "--n", "3", "--p", "3")
    assert code == 0 and "(1, 9, 9, 1)" in out and "level 3" in out
    code, out, _ = run(capsys, "hodge", "--n", "3", "--p", "3,1")
    assert code == 0 and "combined: (1, 19, 19, 1)" in out
    code, out, _ = run(capsys, "hodge", "--n", "5", "--p", "5")
    assert code == 0 and "(1, 25, 100, 100, 25, 1)" in out and "sum = 252" in out


@pytest.mark.parametrize("argv,kernel_dim", [(["--n", "3", "--e", "3", "--p", "3"], 40),
                                             (["--n", "2", "--e", "1", "--p", "2"], 12),
                                             (["--n", "1", "--e", "1", "--p", "1"], 4)])
def test_verify_examples(capsys, argv, kernel_dim):
    code, out, _ = run(capsys, "verify", *argv, "--samples", "5")
    assert code == 0
    assert f"dim {kernel_dim}" in out
    assert "FAIL" not in out


def test_report_text(capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    code, out, _ = run(capsys, "report", "--n", "2", "--p", "2", "--samples", "3")
    assert code == 0 and "h^{n,0} = 1: PASS" in out


def test_report_failure_exit_code(capsys):
    code, out, _ = run(capsys, "report", "--n", "2", "--p", "1", "--override-weil",
                       "--samples", "2", "--format", "machine")
    assert code == 1
    assert json.loads(out)["ok"] is False


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_machine_reports(tmp_path, capsys, name):
    out_file = tmp_path / name
    code = cli.main(["report", *GOLDEN_CASES[name], "--format", "machine", "--out", str(out_file)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert out_file.read_bytes() == (GOLDEN / name).read_bytes()


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 3, "m": 2, "e": "1", "p": [3, 1], "seed": 4}))
    code, out, _ = run(capsys, "construct", "--config", str(cfg))
    assert code == 0 and "Q(sqrt(2))" in out
    code, out, _ = run(capsys, "construct", "--config", str(cfg), "--m", "5")
    assert code == 0 and "Q(sqrt(5))" in out


@pytest.mark.parametrize("content", ["{", "[]", "null", '"x"', '{"n": 2, "p": [2], "bogus": 1}',
                                     '{"n": "two", "p": [2]}', '{"n": 2, "p": {"a": 1}}',
                                     '{"n": 2, "p": [2], "e": 0.5}', '{"n": 2, "p": [2], "e": "1/0"}',
                                     '{"n": 2, "p": [2], "override_weil": "yes"}',
                                     '{"n": 2, "p": []}', '{"p": [2]}', '{"n": -1, "p": [2]}',
                                     '{"n": 2, "p": [2], "m": 4}', '{"n": 2, "p": [2], "e": -3}',
                                     '{"n": 2, "p": [9]}'])
def test_malformed_config_exits_2_silently(tmp_path, capsys, content):
    cfg = tmp_path / "bad.json"
    cfg.write_text(content)
    for cmd in ("construct", "hodge", "verify", "report"):
        code, out, err = run(capsys, cmd, "--config", str(cfg))
        assert code == 2, (cmd, content)
        assert out == ""
        assert err.startswith("weilvhs")


def test_binary_and_missing_config(tmp_path, capsys):
    cfg = tmp_path / "bin.json"
    cfg.write_bytes(b"\xff\xfe\x00")
    assert run(capsys, "report", "--config", str(cfg))[0] == 2
    assert run(capsys, "report", "--config", str(tmp_path / "nope.json"))[0] == 2


def test_bad_flags_exit_2(capsys):
    assert run(capsys, "report", "--n", "x", "--p", "2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["report", "--format", "yaml"])
    assert exc.value.code == 2
