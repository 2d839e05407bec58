import json
import os
from pathlib import Path

import pytest

import sheetcheck

FIXTURES = Path(os.environ.get("SHEETCHECK_TEST_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))
CLEAN = FIXTURES / "clean.json"
MESSY = FIXTURES / "messy.json"


def test_version():
    assert sheetcheck.__version__ == "0.1.0"


def test_formula_helpers():
    assert sheetcheck.canonical_formula("=sum( a1 , B2:b3 )") == "=SUM(A1,B2:B3)"
    assert sheetcheck.nesting_depth("=F14*(1-F16)") == 0
    assert sheetcheck.nesting_depth("=F14*(1-F16)", "operators_count") == 2
    assert sheetcheck.nesting_depth("=IF(SUM(A1:A3)>0,1,0)") == 2
    assert sheetcheck.formula_references("=A1+Sheet2!B2:C3") == ["A1", "Sheet2!B2:C3"]
    assert sheetcheck.numeric_literals("=A1*1.1+2") == [1.1, 2.0]
    with pytest.raises(sheetcheck.FormulaError):
        sheetcheck.canonical_formula("=SUM(")
    with pytest.raises(ValueError):
        sheetcheck.nesting_depth("=1", "both")


def test_assess_clean():
    report = sheetcheck.assess(CLEAN)
    assert len(report["answers"]) == 26
    assert report["answers"][23]["question"] == "Q24"
    assert report["scores"]["overall"] == pytest.approx(8.4, abs=0.05)
    md = sheetcheck.assess_markdown(CLEAN)
    assert "Overall: 8.4" in md


def test_semantics_switch(tmp_path):
    wb = tmp_path / "discount.json"
    wb.write_text(json.dumps({"sheets": [{"name": "Model", "cells": {
        "F14": {"v": 100}, "F16": {"v": 0.2}, "F18": {"f": "=F14*(1-F16)"}}}]}))
    assert sheetcheck.assess(wb)["answers"][23]["verdict"] == "No"
    assert sheetcheck.assess(wb, semantics="operators_count")["answers"][23]["verdict"] == "Yes"


def test_classification_and_graph():
    classes = dict(sheetcheck.classify_cells(CLEAN))
    assert set(classes.values()) <= {"Input", "Calculation", "Output", "Label", "Empty"}
    assert "Input" in classes.values() and "Output" in classes.values()
    assert sheetcheck.dependency_dot(CLEAN).startswith("digraph")


def test_questions_and_corpus():
    qs = sheetcheck.questions()
    assert len(qs) == 26
    assert sum(q["weight"] for q in qs) == 315
    csv = sheetcheck.corpus([CLEAN, MESSY])
    assert csv.splitlines()[0].startswith('"Item","clean","messy"')
    assert csv.splitlines()[-1].startswith('"Overall","8.4","1.3"')
    table = sheetcheck.corpus([CLEAN, MESSY], "json")
    assert table["columns"] == ["clean", "messy"]


def test_errors():
    with pytest.raises(sheetcheck.LoadError):
        sheetcheck.assess("/nonexistent/book.xlsx")
    with pytest.raises(sheetcheck.ChecklistError):
        sheetcheck.assess(CLEAN, answers="/nonexistent/answers.json")


def test_fixture_round_trip(tmp_path):
    copy = tmp_path / "copy.json"
    copy.write_text(sheetcheck.workbook_to_fixture(CLEAN))
    assert sheetcheck.assess(copy)["scores"] == sheetcheck.assess(CLEAN)["scores"]


def test_cli_entry(capsys):
    code, out, err = sheetcheck.run_cli(["questions", "--format", "json"])
    assert code == 0 and len(json.loads(out)) == 26
    code, _, err = sheetcheck.run_cli(["assess", "/nonexistent/x.xlsx"])
    assert code == 1 and err.startswith("sheetcheck: error: ")
    assert sheetcheck.main(["assess", str(CLEAN), "--no-timestamp"]) == 0
    assert "# Maintainability report" in capsys.readouterr().out
