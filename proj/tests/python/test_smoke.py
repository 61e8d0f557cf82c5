import json
import pathlib
import subprocess
import shutil

import jsonschema
import pytest

import bqual

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS = ROOT / "corpus"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def test_cm1_with_cm5_plan():
    report = bqual.evaluate(CORPUS / "CM1.mch", reference=CORPUS / "CM1.mch", plan=CORPUS / "cm5-plan.json",
                            goals=CORPUS / "cm1-goals.txt")
    jsonschema.validate(report, SCHEMA)
    m = report["metrics"]
    assert m["tfcomp"] == 1.0
    assert m["fault_tolerance"] == 0.999
    assert report["exact"]["recoverability"] == "1049/1440"
    assert report["exact"]["functional_analysability"] == "13/48"
    assert report["exact"]["goal_appropriateness"] == "1/2"
    assert m["capacity"] == 2880
    assert report["not_computed"] == {}


def test_cm2_against_cm1():
    report = bqual.evaluate(CORPUS / "CM2.mch", reference=CORPUS / "CM1.mch", trials=2, seed=3)
    jsonschema.validate(report, SCHEMA)
    assert report["exact"]["pfcomp"] == "1177/1200"  # 7062/7200
    assert report["exact"]["pfappr"] == "1129/1152"  # 5645/5760
    assert report["metrics"]["goal_appropriateness"] == "not-computed"
    assert report["provenance"]["seed"] == 3


def test_delta_machine_modularity():
    report = bqual.evaluate(CORPUS / "CM1.mch", reference=CORPUS / "CM1.mch", trials=1,
                            deltas={"inc_minute": CORPUS / "CM5.mch"})
    assert report["modularity"]["inc_minute"] == {"value": 0.958, "exact": "23/24", "source": "machine"}


def test_seeded_runs_repeat():
    a = bqual.evaluate(CORPUS / "CM1.mch", reference=CORPUS / "CM1.mch", trials=3, seed=9)
    b = bqual.evaluate(CORPUS / "CM1.mch", reference=CORPUS / "CM1.mch", trials=3, seed=9)
    assert a["exact"] == b["exact"]


def test_explore_cm4():
    summary = bqual.explore(CORPUS / "CM4.mch")
    assert summary["machine"] == "CM4"
    assert json.dumps(summary).count("1465") >= 1


def test_similarity_and_words():
    def t(x0, y0, op, x1, y1):
        return {"pre": {"x": x0, "y": y0}, "op": op, "post": {"x": x1, "y": y1}}

    left = [t(1, 59, "inc_hour", 2, 1)]
    right = [t(1, 59, "inc_hour", 2, 0)]
    assert bqual.similarity(left, right) == 4
    assert bqual.similarity(left, left) == 5
    assert bqual.similarity([], right) == 0
    assert bqual.word_count((CORPUS / "CM1.mch").read_text()) == 73


def test_errors():
    with pytest.raises(bqual.MachineSyntaxError, match="cm1-goals.txt"):
        bqual.evaluate(CORPUS / "cm1-goals.txt", reference=CORPUS / "CM1.mch")
    with pytest.raises(bqual.BqualError):
        bqual.evaluate(CORPUS / "CM1.mch", required=CORPUS / "diamond.jsonl")
    with pytest.raises(ValueError):
        bqual.evaluate(CORPUS / "CM1.mch")


def test_formatter_round_trips():
    source = (CORPUS / "CM6.mch").read_text()
    once = bqual.format_machine(source)
    assert bqual.format_machine(once) == once


@pytest.mark.skipif(shutil.which("bqual") is None and not (ROOT / "build" / "bqual").exists(),
                    reason="CLI not built")
def test_cli_report_matches_schema(tmp_path):
    exe = shutil.which("bqual") or str(ROOT / "build" / "bqual")
    out = tmp_path / "report.json"
    subprocess.run([exe, "evaluate", "--machine", CORPUS / "CM3.mch", "--reference", CORPUS / "CM1.mch",
                    "--trials", "1", "--out", out], check=True)
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["metrics"]["tfappr"] == 1.0
