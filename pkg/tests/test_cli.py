import json

import pytest

from boardsplit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_fairp_values(capsys):
    assert run(capsys, "fairp", "--b", "2") == (0, "0.381966011250\n")
    assert run(capsys, "fairp", "--b", "1") == (0, "0.500000000000\n")
    code, out = run(capsys, "fairp", "--b", "3")
    assert code == 0 and out.startswith("0.317672")


def test_fairp_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["fairp", "--b", "0"])
    assert err.value.code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as err:
        main(["fairp", "--b", "2", "--bogus"])
    assert err.value.code == 2


def test_board_dump_load_round_trip(tmp_path, capsys):
    path = tmp_path / "board.txt"
    code, _ = run(
        capsys, "board", "dump", "--b", "3", "--d", "2", "--fair",
        "--seed", "11", "--out", str(path),
    )
    assert code == 0
    text = path.read_text()
    assert text.splitlines()[0] == "3 2"
    assert "# params=" in text

    code, out = run(capsys, "board", "load", "--in", str(path))
    assert code == 0
    assert "B=3 D=2 side=9" in out

    # identical invocation reproduces the file byte for byte
    path2 = tmp_path / "again.txt"
    run(capsys, "board", "dump", "--b", "3", "--d", "2", "--fair",
        "--seed", "11", "--out", str(path2))
    assert path2.read_bytes() == path.read_bytes()


def test_board_load_missing_file(capsys):
    code = main(["board", "load", "--in", "/nonexistent/nowhere.txt"])
    assert code == 1


def test_play_prints_trace_and_winner(capsys):
    code, out = run(
        capsys, "play", "--b", "2", "--d", "2", "--p", "0.4", "--seed", "9",
        "--h-look", "2", "--eval", "y",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert len([ln for ln in lines if ln.startswith("ply")]) == 4
    assert lines[-1] in ("winner: H", "winner: V")


def test_tournament_csv_deterministic(tmp_path, capsys):
    args = [
        "tournament", "--b", "2", "--d", "2", "--p", "0.4", "--games", "6",
        "--eval", "r", "--parity", "even", "--seed", "5",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b), "--workers", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().split("\n")
    assert lines[3] == "B,D,p,eval,v_look,k,h_wins,n_games,master_seed"
    assert len(lines) == 6  # k = 0, 2


def test_tournament_spec_json(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "config": {"b": 2, "d": 2, "p": 0.4, "single_diagonal": False},
        "n_games": 4, "k_values": [0, 2], "evaluator": "n",
        "v_lookahead": 0, "master_seed": 77,
    }))
    out_path = tmp_path / "out.csv"
    code, _ = run(capsys, "tournament", "--b", "9", "--d", "9",
                  "--spec-json", str(spec_path), "--out", str(out_path))
    assert code == 0
    assert ",77" in out_path.read_text().strip().split("\n")[-1]


def test_tournament_rejects_oversize(capsys):
    with pytest.raises(SystemExit) as err:
        main(["tournament", "--b", "2", "--d", "13", "--p", "0.4",
              "--games", "1", "--seed", "1"])
    assert err.value.code == 2


def test_decision_quality_csv(tmp_path, capsys):
    path = tmp_path / "dq.csv"
    code, _ = run(
        capsys, "decision-quality", "--b", "2", "--d", "2", "--p", "0.45",
        "--positions", "10", "--eval", "n", "--seed", "3", "--out", str(path),
    )
    assert code == 0
    lines = path.read_text().strip().split("\n")
    assert lines[3] == "B,D,p,eval,k,n_positions,correct_exact,correct_trapwise,master_seed"
    assert len(lines) == 6  # k = 0, 2


def test_analyze_rows_and_zero_bias(capsys):
    code, out = run(capsys, "analyze", "--b", "3", "--d", "6", "--fair", "--k-max", "8")
    assert code == 0
    rows = [ln for ln in out.strip().split("\n") if not ln.startswith(("#", "B,"))]
    assert len(rows) == 4  # k = 2, 4, 6, 8
    assert [r.split(",")[3] for r in rows] == ["2", "4", "6", "8"]

    code, out = run(capsys, "analyze", "--b", "3", "--d", "4", "--p", "0", "--k-max", "4")
    assert code == 0
    rows = [ln for ln in out.strip().split("\n") if not ln.startswith(("#", "B,"))]
    assert all(row.split(",")[-1] == "0.0" for row in rows)


def test_analyze_rejects_bad_k(capsys):
    with pytest.raises(SystemExit) as err:
        main(["analyze", "--b", "3", "--d", "2", "--fair", "--k-max", "8"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["analyze", "--b", "3", "--d", "6", "--fair", "--k-max", "7"])
    assert err.value.code == 2


def test_validate_formulas_passes(capsys):
    code, out = run(capsys, "validate", "--suite", "formulas")
    assert code == 0
    report = json.loads(out)
    assert report["suite"] == "formulas"
    assert report["passed"] is True
    assert all(c["passed"] or c["informational"] for c in report["checks"])


def test_generated_seed_is_recorded(tmp_path, capsys):
    out_path = tmp_path / "t.csv"
    code, out = run(capsys, "tournament", "--b", "2", "--d", "2", "--p", "0.4",
                    "--games", "2", "--out", str(out_path))
    assert code == 0
    assert "generated seed:" in out
    seed = int(out.split("generated seed:")[1].split()[0])
    assert f",{seed}" in out_path.read_text().strip().split("\n")[-1]
