import json

import pytest

from cochainseq.cli import main


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr().out


def test_splitting_check(capsys):
    code, out = run(capsys, "splitting-check")
    assert code == 0 and out.startswith("splitting-check: PASS")
    code, out = run(capsys, "--format", "json", "splitting-check", "--order", "9", "--module", "theta",
                    "--N", "pM", "--r", "4,5")
    rep = json.loads(out)
    assert code == 0 and rep["report"]["all_pass"] and rep["report"]["parameters"]["r"] == [4, 5]


def test_splitting_refuses_small_r(capsys):
    code, out = run(capsys, "splitting-check", "--r", "1")
    assert code == 1 and "r >= 2m" in out


def test_figure(capsys, tmp_path):
    code, out = run(capsys, "--out", str(tmp_path), "figure")
    assert code == 0
    assert (tmp_path / "figure.dot").read_text().startswith("digraph")
    rep = json.loads((tmp_path / "figure.json").read_text())["report"]
    assert len(rep["data"]["objects"]) == 10
    code, out = run(capsys, "--format", "dot", "figure", "--no-include-trivial")
    assert out.startswith("digraph")


def test_dot_only_for_figure(capsys):
    with pytest.raises(SystemExit):
        main(["--format", "dot", "quaternion"])


def test_quaternion(capsys):
    code, out = run(capsys, "quaternion", "--n", "3,4")
    assert code == 0 and "Q_8 ~ Q_16" in out


def test_mainline_contrast_fails(capsys):
    # s = 2 turns out to be equivalent to s = 4, so the contrast check fails
    code, out = run(capsys, "mainline-equiv", "--s", "4", "--contrast", "2")
    assert code == 1 and "[FAIL]" in out


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("n = 3\n")
    code, out = run(capsys, "--config", str(cfg), "quaternion")
    assert code == 0 and "Q_16" not in out


def test_json_deterministic(capsys):
    _, a = run(capsys, "--format", "json", "quaternion", "--n", "3")
    _, b = run(capsys, "--format", "json", "quaternion", "--n", "3")
    assert json.loads(a)["report"] == json.loads(b)["report"]


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("n = 3\n")
    code, out = run(capsys, "--config", str(cfg), "quaternion", "--n", "3,4")
    assert code == 0 and "Q_16" in out
