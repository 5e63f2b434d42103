import json

import pytest

from app.instances.loader import load_set_system
from app.main import main

GEN_FLAGS = ["--gen", "bernoulli", "--n", "16", "--m", "16", "--p", "0.5"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_brute_on_triangle(capsys, triangle_file):
    code, report = run(capsys, ["brute", "--input", str(triangle_file)])
    assert code == 0
    assert report["command"] == "brute"
    assert report["opt_disc"] == 2
    assert report["n_enumerated"] == 8


def test_partial_report_fields(capsys):
    code, report = run(capsys, ["partial", *GEN_FLAGS, "--delta", "0.08", "--seed", "7"])
    assert code == 0
    for key in ("success", "n_active_vars", "contained", "x", "attempts"):
        assert key in report
    assert report["success"]


def test_same_seed_same_bytes(capsys):
    main(["spencer", *GEN_FLAGS, "--seed", "3"])
    first = capsys.readouterr().out
    main(["spencer", *GEN_FLAGS, "--seed", "3"])
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["satisfied"]


def test_gen_then_disc(capsys, tmp_path):
    instance = tmp_path / "sys.txt"
    code, report = run(capsys, ["gen", "--gen", "singleton", "--n", "4", "--output", str(instance)])
    assert code == 0
    assert report["path"] == str(instance)
    assert instance.read_text(encoding="utf-8") == "4 4\n0\n1\n2\n3\n"
    assert load_set_system(instance).m == 4

    coloring = tmp_path / "chi.txt"
    coloring.write_text("1 -1 1 1\n", encoding="utf-8")
    code, report = run(capsys, ["disc", "--input", str(instance), "--coloring", str(coloring)])
    assert code == 0
    assert report["max_abs"] == 1
    assert report["per_constraint"] == [1, -1, 1, 1]


def test_partial_output_verifies(capsys, tmp_path):
    point = tmp_path / "partial.json"
    assert main(["partial", *GEN_FLAGS, "--seed", "2", "--output", str(point)]) == 0
    code, report = run(capsys, ["verify", *GEN_FLAGS, "--seed", "2", "--coloring", str(point)])
    assert code == 0
    assert report["holds"]


def test_beckfiala_command(capsys):
    code, report = run(capsys, ["beckfiala", "--gen", "low-degree", "--n", "16", "--m", "16", "--t", "2",
                                "--degree", "2", "--seed", "1"])
    assert code == 0
    assert report["satisfied"]


def test_bench_command(capsys):
    code, report = run(capsys, ["bench", *GEN_FLAGS, "--runs", "3", "--seed", "1"])
    assert code == 0
    assert len(report["per_run"]) == 3
    assert "success_rate" in report


def test_missing_input_is_a_usage_error(capsys):
    code, report = run(capsys, ["brute"])
    assert code == 2
    assert report["error"]["type"] == "ValidationError"


def test_bad_file_is_a_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n0 7\n", encoding="utf-8")
    code, report = run(capsys, ["partial", "--input", str(path), "--seed", "1"])
    assert code == 0
    assert len(report["x"]) == 5
    assert report["error"]["type"] == "ParseError"


def test_infeasible_threshold_is_a_precondition_error(capsys):
    code, report = run(capsys, ["partial", *GEN_FLAGS, "--threshold", "0"])
    assert code == 2
    assert report["error"]["type"] == "PreconditionError"


def test_exhausted_retries_still_report(capsys):
    code, report = run(capsys, ["partial", *GEN_FLAGS, "--k1", "1e-6", "--retries", "2"])
    assert code == 1
    assert report["error"]["type"] == "RetriesExhausted"
    assert report["success"] is False


def test_unknown_command_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


def test_gen_matrix_output_keeps_the_csv(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    code, report = run(capsys, ["gen", "--gen", "matrix-gaussian", "--n", "5", "--m", "3", "--output", str(path)])
    assert code == 0
    assert report["m"] == 3
    code, report = run(capsys, ["brute", "--input", str(path)])
    assert code == 2


def test_spencer_sharp_thresholds(capsys):
    code, report = run(capsys, ["spencer", *GEN_FLAGS, "--alpha", "sharp", "--seed", "4"])
    assert code == 0
    assert report["satisfied"]
