import json

from click.testing import CliRunner

from k2rank.cli import main
from k2rank.survey import OutputRecord


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_rank4():
    res = run("rank4", "--d", "15")
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["four_rank"] == 1 and obj["primes"] == "3;5" and obj["a_prime"] == 2


def test_rank4_rejects():
    for d in ("9", "1", "10"):
        assert run("rank4", "--d", d).exit_code == 2


def test_survey_json_and_csv(tmp_path):
    res = run("survey", "--family", "X", "--max", "2000", "--threads", "1")
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["family"] == "X" and obj["min"] == 15 and obj["total"] == sum(obj["counts"].values())
    out = tmp_path / "x.csv"
    res = run("survey", "--family", "X", "--max", "2000", "--format", "csv", "--out", str(out))
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == OutputRecord.CSV_HEADER
    recs = [OutputRecord.from_csv_row(x) for x in lines[1:]]
    assert len(recs) == obj["total"]


def test_survey_bad_args():
    assert run("survey", "--family", "X", "--min", "20", "--max", "10").exit_code == 2
    assert run("survey", "--family", "X", "--max", "100", "--threads", "0").exit_code == 2
    assert run("survey", "--family", "Q").exit_code == 2


def test_density():
    res = run("density", "--p", "17", "--family", "B", "--lmax", "5000")
    assert res.exit_code == 0
    assert json.loads(res.output)["family"] == "B"
    assert run("density", "--p", "19", "--family", "A").exit_code == 2


def test_verify():
    res = run("verify", "--suite", "symbols", "--max", "1000")
    assert res.exit_code == 0 and res.output.startswith("PASS symbols")
    res = run("verify", "--suite", "prop34", "--max", "20000")
    assert res.exit_code == 0 and "outside_premise" in res.output
