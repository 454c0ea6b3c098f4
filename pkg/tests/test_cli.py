"""
CSV ingestion and the command-line front end.
"""

import json

import numpy as np
import pytest

from src.cli import DatasetSpec, compare_groups, parse_csv, run_cli
from src.errors import (
    EXIT_INPUT_ERROR,
    EXIT_NUMERIC_ERROR,
    DatasetNotFound,
    EmptyGroup,
    GroupCountNotTwo,
    MissingColumn,
    NonPositiveValues,
)
from src.estimators import Sample, ShareQuery, infer_share
from src.streaming import SufficientStats, finalize


def _write(path, text):
    path.write_text(text)
    return path


@pytest.fixture
def hand_csv(tmp_path):
    return _write(tmp_path / "hand.csv", "x\n1\n2\n3\n4\n")


@pytest.fixture
def grouped_csv(tmp_path):
    rows = ["wage,smsa"]
    rng = np.random.default_rng(4)
    for value in rng.lognormal(0.0, 0.7, 300):
        rows.append(f"{float(value)!r},yes")
    for value in rng.lognormal(0.1, 0.5, 200):
        rows.append(f"{float(value)!r},no")
    return _write(tmp_path / "wages.csv", "\n".join(rows) + "\n")


def _run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# =============================================================================
# parse_csv
# =============================================================================

def test_parse_round_trips_values(tmp_path):
    path = _write(tmp_path / "three.csv", "v\n1.5\n2.25\n0.1\n")
    parsed = parse_csv(DatasetSpec(path, "v"))
    np.testing.assert_array_equal(parsed.groups["all"].values, np.array([1.5, 2.25, 0.1]))


def test_parse_groups_in_file_order(grouped_csv):
    parsed = parse_csv(DatasetSpec(grouped_csv, "wage", group_column="smsa"))
    assert list(parsed.groups) == ["yes", "no"]
    assert parsed.counts() == {"yes": 300, "no": 200}


def test_parse_without_header_and_custom_delimiter(tmp_path):
    path = _write(tmp_path / "raw.csv", "a;1\nb;2\na;3\nb;4\n")
    parsed = parse_csv(DatasetSpec(path, "1", group_column="0", delimiter=";", header=False))
    np.testing.assert_array_equal(parsed.groups["a"].values, [1.0, 3.0])
    np.testing.assert_array_equal(parsed.groups["b"].values, [2.0, 4.0])


def test_parse_missing_file(tmp_path):
    with pytest.raises(DatasetNotFound):
        parse_csv(DatasetSpec(tmp_path / "nope.csv", "x"))


def test_parse_missing_column(hand_csv):
    with pytest.raises(MissingColumn):
        parse_csv(DatasetSpec(hand_csv, "wage"))


def test_parse_header_only(tmp_path):
    with pytest.raises(EmptyGroup):
        parse_csv(DatasetSpec(_write(tmp_path / "empty.csv", "x\n"), "x"))


def test_parse_strict_rejects_nonpositive(tmp_path):
    path = _write(tmp_path / "bad.csv", "x\n1\n0\n-2\nabc\n3\n")
    with pytest.raises(NonPositiveValues) as info:
        parse_csv(DatasetSpec(path, "x"))
    assert info.value.count == 3


def test_parse_skip_counts_dropped_rows(tmp_path):
    path = _write(tmp_path / "bad.csv", "x,g\n1,a\n0,a\n-2,b\nabc,b\n3,a\n5,b\n7,b\n")
    parsed = parse_csv(DatasetSpec(path, "x", group_column="g"), skip_nonpositive=True)
    assert parsed.skipped == {"a": 1, "b": 2}
    assert parsed.total_skipped == 3
    assert parsed.counts() == {"a": 2, "b": 2}


def test_parse_group_emptied_by_skipping(tmp_path):
    path = _write(tmp_path / "bad.csv", "x,g\n1,a\n2,a\n0,b\n")
    with pytest.raises(EmptyGroup):
        parse_csv(DatasetSpec(path, "x", group_column="g"), skip_nonpositive=True)


# =============================================================================
# compare_groups
# =============================================================================

def test_compare_identical_groups_gives_zero_statistics(hand_csv):
    sample = parse_csv(DatasetSpec(hand_csv, "x")).groups["all"]
    report = compare_groups({"left": sample, "right": sample}, p=0.5)
    for test in report.tests:
        assert test.t_statistic == 0.0
        assert not report.rejects(test.method)


def test_compare_needs_two_groups(hand_csv):
    sample = parse_csv(DatasetSpec(hand_csv, "x")).groups["all"]
    with pytest.raises(GroupCountNotTwo):
        compare_groups({"only": sample}, p=0.5)


def test_compare_order_flips_sign(grouped_csv):
    groups = parse_csv(DatasetSpec(grouped_csv, "wage", group_column="smsa")).groups
    forward = compare_groups(groups, p=0.75, order=["yes", "no"])
    backward = compare_groups(groups, p=0.75, order=["no", "yes"])
    assert forward.test("proposed").t_statistic == pytest.approx(-backward.test("proposed").t_statistic)
    with pytest.raises(EmptyGroup):
        compare_groups(groups, p=0.75, order=["yes", "maybe"])


# =============================================================================
# run_cli
# =============================================================================

def test_estimate_hand_example(capsys, hand_csv):
    code, out, _ = _run(capsys, "estimate", hand_csv, "--value-column", "x", "--p", "0.5")
    assert code == 0
    document = json.loads(out)
    assert document["schema_version"] == 1
    result = document["results"][0]
    assert result["q_hat"] == 2.0
    assert result["m_hat"] == pytest.approx(0.3, abs=1e-12)
    assert result["variances"]["proposed"] == pytest.approx(0.003, abs=1e-12)
    assert result["variances"]["fixed_q"] == pytest.approx(0.047, abs=1e-12)
    assert {ci["method"] for ci in result["intervals"]} == {"proposed", "fixed_q"}


def test_estimate_equals_library_calls(capsys, grouped_csv):
    code, out, _ = _run(capsys, "estimate", grouped_csv, "--value-column", "wage",
                        "--group-column", "smsa", "--p", "0.75")
    assert code == 0
    groups = parse_csv(DatasetSpec(grouped_csv, "wage", group_column="smsa")).groups
    for result in json.loads(out)["results"]:
        direct = infer_share(groups[result["group"]], ShareQuery(0.75))
        assert result["m_hat"] == direct.m_hat
        assert result["variances"]["proposed"] == direct.variance("proposed")
        assert result["variances"]["fixed_q"] == direct.variance("fixed_q")


def test_estimate_table_format(capsys, hand_csv):
    code, out, _ = _run(capsys, "estimate", hand_csv, "--value-column", "x", "--p", "0.5",
                        "--format", "table")
    assert code == 0
    assert out.startswith("all: n=4")
    assert "V=0.003" in out


def test_estimate_with_bootstrap_is_reproducible(capsys, hand_csv):
    argv = ("estimate", hand_csv, "--value-column", "x", "--p", "0.5",
            "--methods", "proposed,bootstrap", "--boot", "30", "--seed", "3")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second
    assert "bootstrap" in json.loads(first)["results"][0]["variances"]


@pytest.mark.parametrize("argv", [
    ("estimate", "missing.csv", "--value-column", "x"),
    ("estimate", "{hand}", "--value-column", "wage"),
    ("estimate", "{hand}", "--value-column", "x", "--p", "1.5"),
    ("estimate", "{hand}", "--value-column", "x", "--methods", "jackknife"),
    ("compare", "{hand}", "--value-column", "x"),
])
def test_input_errors_exit_two(capsys, hand_csv, tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    argv = [a.format(hand=hand_csv) for a in argv]
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_INPUT_ERROR
    assert out == ""
    assert err.startswith("Error: ")


def test_header_only_file_exits_two(capsys, tmp_path):
    path = _write(tmp_path / "empty.csv", "x\n")
    code, _, err = _run(capsys, "estimate", path, "--value-column", "x")
    assert code == EXIT_INPUT_ERROR
    assert "no data rows" in err


def test_too_small_sample_exits_three(capsys, tmp_path):
    path = _write(tmp_path / "two.csv", "x\n1\n2\n")
    code, _, err = _run(capsys, "estimate", path, "--value-column", "x", "--p", "0.4")
    assert code == EXIT_NUMERIC_ERROR
    assert err.startswith("Error: ")


def test_skip_nonpositive_flag(capsys, tmp_path):
    path = _write(tmp_path / "bad.csv", "x\n1\n0\n2\n3\n4\n")
    assert _run(capsys, "estimate", path, "--value-column", "x")[0] == EXIT_INPUT_ERROR
    code, out, _ = _run(capsys, "estimate", path, "--value-column", "x", "--p", "0.5", "--skip-nonpositive")
    assert code == 0
    document = json.loads(out)
    assert document["dataset"]["skipped"] == {"all": 1}
    assert document["results"][0]["m_hat"] == pytest.approx(0.3, abs=1e-12)


def test_invalid_seed_environment_exits_two(capsys, hand_csv, monkeypatch):
    monkeypatch.setenv("SHARE_SEED", "abc")
    code, _, err = _run(capsys, "estimate", hand_csv, "--value-column", "x")
    assert code == EXIT_INPUT_ERROR
    assert "SHARE_SEED" in err


def test_compare_command(capsys, grouped_csv):
    code, out, _ = _run(capsys, "compare", grouped_csv, "--value-column", "wage",
                        "--group-column", "smsa", "--order", "yes,no")
    assert code == 0
    document = json.loads(out)
    assert [g["group"] for g in document["groups"]] == ["yes", "no"]
    assert {t["method"] for t in document["tests"]} == {"proposed", "fixed_q"}

    code, table, _ = _run(capsys, "compare", grouped_csv, "--value-column", "wage",
                          "--group-column", "smsa", "--format", "table")
    assert code == 0
    assert table.splitlines()[0].split() == ["group", "size", "m_hat", "V", "proposed", "V", "fixed_q"]


def test_simulate_json_is_byte_identical(capsys):
    argv = ("simulate", "--dist", "exp", "--lambda", "1", "--n", "200", "--p", "0.75",
            "--reps", "100", "--seed", "7", "--methods", "proposed,fixed_q", "--format", "json")
    code, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert code == 0
    assert first == second
    document = json.loads(first)
    assert document["schema_version"] == 1
    assert document["reports"][0]["config"]["case"] == "Exp(1)"


def test_simulate_rejects_few_replications(capsys):
    code, _, _ = _run(capsys, "simulate", "--reps", "10", "--methods", "proposed")
    assert code == EXIT_INPUT_ERROR


def test_bench_command(capsys):
    code, out, _ = _run(capsys, "bench", "--dist", "unif", "--upper", "2", "--n", "500",
                        "--repeats", "10", "--methods", "proposed,bootstrap", "--boot", "10",
                        "--format", "json")
    assert code == 0
    report = json.loads(out)["reports"][0]
    assert report["bootstrap_ratio"] > 0.0


def test_shard_round_trip(capsys, tmp_path):
    values = np.random.default_rng(8).exponential(1.0, 400)
    shard_paths = []
    for i, chunk in enumerate(np.array_split(values, 3)):
        csv_path = _write(tmp_path / f"shard{i}.csv", "x\n" + "\n".join(repr(float(v)) for v in chunk) + "\n")
        code, out, _ = _run(capsys, "shard-stats", csv_path, "--value-column", "x", "--q", "1.2", "--p", "0.7")
        assert code == 0
        shard_paths.append(_write(tmp_path / f"shard{i}.json", out))

    code, out, _ = _run(capsys, "shard-merge", *shard_paths)
    assert code == 0
    merged = json.loads(out)
    direct = finalize(SufficientStats.from_values(values, 1.2, 0.7))
    assert merged["stats"]["n"] == 400
    assert merged["results"][0]["m_hat"] == pytest.approx(direct.m_hat, rel=1e-12)
    assert merged["results"][0]["variances"]["proposed"] == pytest.approx(direct.variance("proposed"), rel=1e-12)


def test_shard_merge_matches_estimate(capsys, hand_csv, tmp_path):
    _, stats_out, _ = _run(capsys, "shard-stats", hand_csv, "--value-column", "x", "--q", "2", "--p", "0.5")
    record_path = _write(tmp_path / "hand.json", stats_out)
    _, merged_out, _ = _run(capsys, "shard-merge", record_path)
    _, estimate_out, _ = _run(capsys, "estimate", hand_csv, "--value-column", "x", "--p", "0.5")

    merged = json.loads(merged_out)["results"][0]
    direct = json.loads(estimate_out)["results"][0]
    assert merged["m_hat"] == pytest.approx(direct["m_hat"], rel=1e-12)
    assert merged["variances"]["proposed"] == pytest.approx(direct["variances"]["proposed"], rel=1e-12)


def test_shard_merge_rejects_mismatched_thresholds(capsys, tmp_path):
    a = SufficientStats.from_values([1.0, 2.0], 1.5, 0.5).to_record()
    b = SufficientStats.from_values([3.0, 4.0], 2.5, 0.5).to_record()
    path = _write(tmp_path / "records.json", json.dumps({"records": [a, b]}))
    code, _, err = _run(capsys, "shard-merge", path)
    assert code == EXIT_INPUT_ERROR
    assert "merge" in err


def test_shard_merge_rejects_bad_json(capsys, tmp_path):
    path = _write(tmp_path / "broken.json", "{not json")
    assert _run(capsys, "shard-merge", path)[0] == EXIT_INPUT_ERROR


def test_shard_merge_accepts_sample_from_library(capsys, tmp_path, rng):
    values = rng.lognormal(0.4, 0.5, 1000)
    sample = Sample(values)
    q = float(np.sort(values)[749])
    record = SufficientStats.from_values(values, q, 0.75).to_record()
    path = _write(tmp_path / "one.json", json.dumps(record))
    code, out, _ = _run(capsys, "shard-merge", path)
    assert code == 0
    direct = infer_share(sample, ShareQuery(0.75))
    assert json.loads(out)["results"][0]["variances"]["proposed"] == pytest.approx(
        direct.variance("proposed"), rel=1e-12
    )
