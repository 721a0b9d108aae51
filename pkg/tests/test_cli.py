import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from qverma.cli import RunConfig, ConfigError, run

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report-schema.json").read_text())


def run_json(*argv):
    code, text = run(list(argv))
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_gram_rank_one():
    code, report = run_json("gram", "--n", "1", "--depth", "2")
    assert code == 0 and report["passed"]
    diag = [c["predicted_diagonal"][0] for c in report["contents"]]
    # 1, [lambda_1]_q, [2]_q! [lambda_1]_q [lambda_1 - 1]_q at q = 2, q^{lambda_1} = 3
    assert diag == ["1/1", "16/9", "200/81"]


def test_gram_depth_zero():
    code, report = run_json("gram", "--depth", "0")
    assert code == 0
    assert report["contents"][0]["standard_gram"] == [["1/1"]]


def test_gram_default_point_verdict():
    code, report = run_json("gram", "--q", "2", "--z", "3,5", "--depth", "4")
    assert code == 0 and all(c["diagonal_and_matching"] for c in report["contents"])
    assert report["point"] == {"n": 2, "q": "2/1", "z": ["3/1", "5/1"]}


def test_verify_named_suite():
    code, report = run_json("verify", "--n", "3", "--depth", "2", "--suite", "row-commutativity")
    assert code == 0
    assert len(report["suites"]) == 4  # main point plus three trials
    assert len(report["points"]) == 4


def test_verify_is_deterministic():
    a = run(["verify", "--seed", "4", "--depth", "2", "--suite", "defining-relations", "--trials", "2"])
    b = run(["verify", "--seed", "4", "--depth", "2", "--suite", "defining-relations", "--trials", "2"])
    assert a == b


def test_singular_generic_and_arranged():
    code, report = run_json("singular", "--k", "1", "--m", "2")
    assert code == 0 and not report["criterion"] and not report["singular"]
    assert not report["e_images_zero"]["1"]
    for branch in ("positive", "negative"):
        code, report = run_json("singular", "--n", "3", "--k", "2", "--m", "2", "--arrange", branch)
        assert code == 0 and report["criterion"] and report["singular"]
        assert all(report["e_images_zero"].values())


def test_inverse_identity_and_degenerate():
    code, report = run_json("inverse", "--depth", "3")
    assert code == 0
    assert report["contents"][0]["inverse"] == [["1/1"]]
    code, report = run_json("inverse", "--z", "3,1/4", "--depth", "3")
    assert code == 1 and report["error"] == "DegenerateWeight"
    assert report["witness"] in ([1, 1, 0], [2, 0, 1])


def test_flip_compare_patterns():
    code, report = run_json("flip-compare", "--depth", "3")
    assert code == 0
    assert all(c["original_determinant"] != "0/1" and c["flipped_determinant"] != "0/1" for c in report["contents"])
    code, report = run_json("flip-compare", "--depth", "0")
    assert report["contents"][0]["original_determinant"] == "1/1"
    code, report = run_json("flip-compare", "--z", "3,1/4", "--depth", "3")
    entry = next(c for c in report["contents"] if c["content"] == [2, 1])
    assert entry["original_determinant"] == "0/1"
    assert entry["flipped_determinant"] != "0/1" and entry["standard_gram_determinant"] != "0/1"
    assert code == 0


def test_csv_output():
    code, text = run(["gram", "--n", "1", "--depth", "1", "--format", "csv"])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][:4] == ["# n", "1", "q", "2/1"]
    assert rows[1] == ["content", "quantity", "row", "col", "value"]
    assert ["(1)", "standard_gram", "0", "0", "16/9"] in rows


def test_text_output_shows_factors():
    code, text = run(["gram", "--n", "1", "--depth", "2", "--format", "text"])
    assert "[2]_q! [lambda_11]_q [lambda_11 - 1]_q" in text
    assert text.endswith("PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["gram", "--z", "1,2,3"],
        ["gram", "--depth", "-1"],
        ["verify", "--suite", "nope"],
        ["gram", "--q", "1"],
        ["singular", "--k", "5", "--m", "1"],
        ["verify", "--trials", "0"],
    ],
)
def test_invalid_config_exits_2(argv):
    code, text = run(argv)
    assert code == 2 and text.startswith("qverma: error")


def test_z_and_seed_are_exclusive():
    with pytest.raises(SystemExit):
        run(["gram", "--z", "3,5", "--seed", "1"])
    with pytest.raises(ConfigError):
        RunConfig(n=2, q=2, z=(3, 5), seed=1, depth=1, trials=1)


def test_float_literals_rejected():
    with pytest.raises(SystemExit):
        run(["gram", "--q", "0.5"])


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "qverma.cli", "list-suites"], capture_output=True, text=True, check=True
    )
    assert "shapovalov-diagonal" in out.stdout.split()
