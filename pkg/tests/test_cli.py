"""Command-line behavior: output shape, exit codes, determinism, replay."""

import json
import subprocess
import sys

import numpy as np
import pytest

from detcs import save_matrix
from detcs.cli import run
from detcs.fuzz import complex_normal


@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(80)
    paths = {}

    def put(name, matrix):
        p = tmp_path / f"{name}.mat"
        save_matrix(p, matrix)
        paths[name] = str(p)

    put("i3", np.eye(3, dtype=complex))
    put("wide", complex_normal(rng, 2, 3))
    a = np.eye(3, 2, dtype=complex)
    b = np.zeros((3, 2), dtype=complex)
    b[0, 0] = 1.0
    b[1, 1] = b[2, 1] = 1.0 / np.sqrt(2.0)
    put("plane_a", a)
    put("plane_b", b)
    tall = complex_normal(rng, 4, 2)
    put("tall", tall)
    put("tall_span", tall @ complex_normal(rng, 2, 2))
    put("tall_other", complex_normal(rng, 4, 2))
    deficient = complex_normal(rng, 4, 1) @ complex_normal(rng, 1, 2)
    put("deficient", deficient)
    g = complex_normal(rng, 4, 4)
    put("hpd", g.conj().T @ g + 1e-3 * np.eye(4))
    put("indefinite", np.diag([1.0, -2.0, 1.0]).astype(complex))
    return paths


def test_verify_square_equality(files, capsys):
    code = run(["verify", "--a", files["i3"], "--b", files["i3"]])
    out = capsys.readouterr().out
    assert code == 0
    assert "case: SquareEqual" in out
    assert "equality: yes" in out


def test_verify_wide_zero_sides(files, capsys):
    code = run(["verify", "--a", files["wide"], "--b", files["wide"]])
    out = capsys.readouterr().out
    assert code == 0
    assert "case: WideEqualZero" in out
    assert out.count("zero") == 2


def test_verify_json_record(files, capsys):
    code = run(["verify", "--a", files["plane_a"], "--b", files["plane_b"], "--json"])
    out = capsys.readouterr().out
    assert code == 0
    record = json.loads(out)
    assert record["case"] == "FullRankStrict"
    assert record["equality"] is False
    assert abs(record["correlation"] - 1.0 / np.sqrt(2.0)) < 1e-12
    assert abs(record["relative_gap"] - 0.5) < 1e-12
    assert record["lhs"]["zero"] is False
    assert record["tol"] == 1e-9


def test_verify_json_square_has_null_correlation(files, capsys):
    run(["verify", "--a", files["i3"], "--b", files["i3"], "--json"])
    record = json.loads(capsys.readouterr().out)
    assert record["correlation"] is None


def test_verify_with_weight_and_check(files, capsys):
    code = run(
        ["verify", "--a", files["tall"], "--b", files["tall_other"], "--m", files["hpd"], "--check"]
    )
    assert code == 0
    assert "case: FullRankStrict" in capsys.readouterr().out


def test_verify_indefinite_weight_exits_2(files, capsys):
    code = run(["verify", "--a", files["i3"], "--b", files["i3"], "--m", files["indefinite"]])
    captured = capsys.readouterr()
    assert code == 2
    assert "not positive" in captured.err


def test_verify_missing_file_exits_2(tmp_path, files, capsys):
    code = run(["verify", "--a", str(tmp_path / "nope.mat"), "--b", files["i3"]])
    assert code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_verify_parse_error_reports_line(tmp_path, files, capsys):
    bad = tmp_path / "bad.mat"
    bad.write_text("1 1\n1 x\n")
    code = run(["verify", "--a", str(bad), "--b", files["i3"]])
    captured = capsys.readouterr()
    assert code == 2
    assert "line 2" in captured.err


def test_correlate_half_tilted_plane(files, capsys):
    code = run(["correlate", "--a", files["plane_a"], "--b", files["plane_b"], "--check"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("correlation: 0.70710678118654")
    assert lines[1].startswith("column norms: 1.0 0.70710678118654")
    assert lines[2].startswith("oracle cosines: 1.0 0.70710678118654")


def test_correlate_square_regime_exits_2(files, capsys):
    code = run(["correlate", "--a", files["i3"], "--b", files["i3"]])
    captured = capsys.readouterr()
    assert code == 2
    assert "m > n" in captured.err


def test_correlate_rank_deficient_exits_2(files, capsys):
    code = run(["correlate", "--a", files["deficient"], "--b", files["tall"]])
    assert code == 2
    assert "depend" in capsys.readouterr().err


def test_classify_prints_tag_and_clause(files, capsys):
    code = run(["classify", "--a", files["tall"], "--b", files["tall_span"]])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "FullRankSameSpan"
    assert out[1].startswith("clause: ")

    run(["classify", "--a", files["deficient"], "--b", files["tall"]])
    assert capsys.readouterr().out.splitlines()[0] == "RankDeficientZero"

    code = run(
        ["classify", "--a", files["tall"], "--b", files["tall_other"], "--subspace-tol", "1e-6"]
    )
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "FullRankStrict"


def test_fuzz_small_run_passes(capsys):
    code = run(["fuzz", "--trials", "5", "--seed", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("fuzz: trials=5 seed=1")
    assert "total: 20/20 passed" in out


def test_fuzz_repeat_runs_identical(capsys):
    run(["fuzz", "--trials", "8", "--seed", "9"])
    first = capsys.readouterr().out
    run(["fuzz", "--trials", "8", "--seed", "9"])
    second = capsys.readouterr().out
    assert first == second


def test_fuzz_env_seed_override(monkeypatch, capsys):
    run(["fuzz", "--trials", "5", "--seed", "123"])
    direct = capsys.readouterr().out
    monkeypatch.setenv("DETCS_SEED", "123")
    run(["fuzz", "--trials", "5", "--seed", "999"])
    overridden = capsys.readouterr().out
    assert direct == overridden


def test_fuzz_bad_env_seed_exits_2(monkeypatch, capsys):
    monkeypatch.setenv("DETCS_SEED", "not-a-number")
    code = run(["fuzz", "--trials", "1", "--seed", "0"])
    assert code == 2
    assert "DETCS_SEED" in capsys.readouterr().err


def test_fuzz_bad_ensemble_exits_2(capsys):
    code = run(["fuzz", "--trials", "1", "--seed", "0", "--ensembles", "ginibre,nope"])
    assert code == 2
    assert "ensemble" in capsys.readouterr().err


def test_fuzz_violation_writes_replay_that_reproduces(tmp_path, monkeypatch, capsys):
    # a tolerance below roundoff turns honest equality cases into violations;
    # the emitted replay file must reproduce exit 3 through cmd_verify
    monkeypatch.chdir(tmp_path)
    code = run(
        ["fuzz", "--trials", "3", "--seed", "7", "--ensembles", "shared_span", "--tol", "1e-17"]
    )
    out = capsys.readouterr().out
    assert code == 3
    assert "VIOLATION" in out
    replay_lines = [ln for ln in out.splitlines() if ln.startswith("replay: ")]
    assert replay_lines
    argv = replay_lines[0].removeprefix("replay: detcs ").split()
    assert (tmp_path / argv[2]).exists()
    replay_code = run(argv)
    captured = capsys.readouterr()
    assert replay_code == 3
    assert "invariant violation" in captured.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "detcs", "fuzz", "--trials", "2", "--seed", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "total: 8/8 passed" in proc.stdout
