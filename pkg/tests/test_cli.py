import json

import pytest

from levelwalk import cli


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    records = [json.loads(line) for line in captured.out.splitlines()]
    return code, records, captured.err


def test_count(capsys):
    code, recs, _ = run_cli(capsys, ["count", "--tree", "full:2", "--seed", "1"])
    assert code == 0
    assert recs[0]["size"] == 7
    assert recs[0]["command"] == "count"
    assert recs[0]["seed"] == 1
    assert "version" in recs[0]


def test_gen(capsys):
    code, recs, _ = run_cli(capsys, ["gen", "--tree", "comb:2", "--seed", "1"])
    assert code == 0
    assert recs[0]["nodes"] == ["", "0", "1", "00", "01"]


def test_missing_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "--tree", "full:2"])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "--tree", "full:2", "--seed", "1", "--bogus"])
    assert exc.value.code == 2


def test_bad_descriptor_is_parse_error(capsys):
    code, _, err = run_cli(capsys, ["count", "--tree", "pyramid:9", "--seed", "1"])
    assert code == cli.EXIT_PARSE
    assert "descriptor" in err


def test_bad_cnf_file_is_parse_error(tmp_path, capsys):
    f = tmp_path / "broken.cnf"
    f.write_text("p cnf 1 1\n0\n")
    code, _, err = run_cli(capsys, ["count", "--tree", f"cnf:{f}", "--seed", "1"])
    assert code == cli.EXIT_PARSE


def test_cap_exceeded(capsys):
    code, _, err = run_cli(capsys, ["count", "--tree", "full:12", "--seed", "1",
                                    "--enum-cap", "100"])
    assert code == cli.EXIT_CAP


def test_conductance_record(capsys):
    code, recs, _ = run_cli(capsys, ["conductance", "--tree", "full:2",
                                     "--seed", "1"])
    assert code == 0
    rec = recs[0]
    assert rec["phi"] == "1/8"
    assert rec["bound"] == "1/12"
    assert rec["bound_ok"] is True


def test_conductance_cap(capsys):
    code, _, _ = run_cli(capsys, ["conductance", "--tree", "full:5",
                                  "--seed", "1"])
    assert code == cli.EXIT_CAP


def test_mixing_record(capsys):
    code, recs, _ = run_cli(capsys, ["mixing", "--tree", "full:4", "--seed", "1",
                                     "--eps", "1/4"])
    assert code == 0
    assert recs[0]["bound_ok"] is True
    assert recs[0]["tau"] >= 1
    assert recs[0]["eps"] == "1/4"


def test_validate_passes(capsys):
    code, recs, _ = run_cli(capsys, ["validate", "--tree", "path:4", "--seed", "1"])
    assert code == 0
    names = {r["check"] for r in recs}
    assert {"prefix_closed", "stationary_lazy", "stationary_nonlazy",
            "detailed_balance_lazy", "telescoping",
            "level_recurrence"} <= names
    assert all(r["ok"] for r in recs)


def test_validate_guarantee_violation(monkeypatch, capsys):
    monkeypatch.setattr(cli, "verify_stationary", lambda chain, profile: False)
    code, recs, _ = run_cli(capsys, ["validate", "--tree", "full:2", "--seed", "1"])
    assert code == cli.EXIT_GUARANTEE
    assert any(not r["ok"] for r in recs)


def test_estimate_alpha_runs(capsys):
    code, recs, _ = run_cli(capsys, [
        "estimate-alpha", "--tree", "full:2", "--seed", "3", "--zeta", "0.2",
        "--delta", "0.2", "--burn-in-mode", "exact-measured"])
    assert code == 0
    assert 0 < recs[0]["alpha"] < 1
    assert recs[0]["burn_in_mode"] == "exact-measured"


def test_estimate_size_runs(capsys):
    code, recs, _ = run_cli(capsys, [
        "estimate-size", "--tree", "full:3", "--seed", "3", "--xi", "0.5",
        "--delta", "0.5", "--burn-in-mode", "exact-measured"])
    assert code == 0
    assert abs(recs[0]["size"] - 15) < 0.5 * 8
    assert len(recs[0]["per_level_alpha"]) == 4


def test_estimate_prob_runs(capsys):
    code, recs, _ = run_cli(capsys, [
        "estimate-prob", "--tree", "full:3", "--seed", "3", "--xi", "0.5",
        "--delta", "0.5", "--burn-in-mode", "exact-measured"])
    assert code == 0
    assert 0 <= recs[0]["probability"] <= 2


def test_sample_and_trace(tmp_path, capsys):
    trace = tmp_path / "walk.txt"
    argv = ["sample", "--tree", "full:3", "--seed", "5", "--m", "3",
            "--tv-eps", "0.2", "--burn-in-mode", "exact-measured",
            "--trace", str(trace)]
    code, recs, _ = run_cli(capsys, argv)
    assert code == 0
    samples_traced = recs[0]["samples"]
    steps = recs[0]["burn_in"]
    lines = trace.read_text().splitlines()
    assert lines.count("# walker 0") == 1
    assert len(lines) == 3 * (steps + 1)
    # the engine path (no trace) must produce the same samples
    code2, recs2, _ = run_cli(capsys, argv[:-2])
    assert recs2[0]["samples"] == samples_traced


def test_baseline_runs(capsys):
    code, recs, _ = run_cli(capsys, [
        "baseline", "--tree", "comb:8", "--seed", "2", "--xi", "0.1"])
    assert code == 0
    assert abs(recs[0]["size"] - 17) <= 0.1 * 256


def test_knuth_runs(capsys):
    code, recs, _ = run_cli(capsys, [
        "knuth", "--tree", "full:2", "--seed", "2", "--reps", "10"])
    assert code == 0
    assert recs[0]["mean"] == 7.0
    assert recs[0]["stderr"] == 0.0


def test_bench_emits_per_pair(capsys):
    code, recs, _ = run_cli(capsys, [
        "bench", "--seed", "4", "--ns", "2,3", "--estimators", "alpha,knuth",
        "--zeta", "0.5", "--delta", "0.5", "--burn-in-mode", "exact-measured"])
    assert code == 0
    assert len(recs) == 4
    keys = {(r["n"], r["estimator"]) for r in recs}
    assert keys == {(2, "alpha"), (3, "alpha"), (2, "knuth"), (3, "knuth")}
    assert all("chain_steps_total" in r for r in recs)


def test_byte_identical_repeats(capsys):
    argv = ["estimate-size", "--tree", "hash:4:0.7:9", "--seed", "11",
            "--xi", "0.5", "--delta", "0.5", "--burn-in-mode", "exact-measured"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("\n")


def test_csv_format(capsys):
    code = cli.main(["count", "--tree", "full:2", "--seed", "1",
                     "--format", "csv"])
    out = capsys.readouterr().out
    assert code == 0
    header, row = out.splitlines()
    assert "size" in header.split(",")
    cols = dict(zip(header.split(","), row.split(",")))
    assert cols["size"] == "7"
