"""Maintainability checklist for spreadsheet workbooks."""

import json
import sys

from . import _sheetcheck as _core
from ._sheetcheck import (
    ChecklistError,
    ConfigError,
    FormulaError,
    LoadError,
    ReportError,
    canonical_formula,
    classify_cells,
    dependency_dot,
    formula_references,
    nesting_depth,
    numeric_literals,
    questions,
    run_cli,
    workbook_to_fixture,
)

__version__ = _core.__version__

__all__ = [
    "ChecklistError",
    "ConfigError",
    "FormulaError",
    "LoadError",
    "ReportError",
    "assess",
    "assess_markdown",
    "canonical_formula",
    "classify_cells",
    "corpus",
    "dependency_dot",
    "formula_references",
    "main",
    "nesting_depth",
    "numeric_literals",
    "questions",
    "run_cli",
    "workbook_to_fixture",
]


def _opt(value):
    return None if value is None else str(value)


def assess(path, *, weights=None, config=None, semantics=None, answers=None):
    """Assess one workbook and return the report as a dict."""
    text = _core.assess_report(str(path), "json", weights=_opt(weights), config=_opt(config),
                               semantics=semantics, answers=_opt(answers))
    return json.loads(text)


def assess_markdown(path, *, weights=None, config=None, semantics=None, answers=None):
    return _core.assess_report(str(path), "md", weights=_opt(weights), config=_opt(config),
                               semantics=semantics, answers=_opt(answers))


def corpus(paths, format="csv", *, weights=None, config=None, semantics=None):
    """Side-by-side table for several workbooks; json is returned parsed."""
    text = _core.corpus_report([str(p) for p in paths], format, weights=_opt(weights),
                               config=_opt(config), semantics=semantics)
    return json.loads(text) if format == "json" else text


def main(argv=None):
    args = sys.argv[1:] if argv is None else list(argv)
    # the core reads prompts' answers from a buffer, so only slurp stdin when asked to
    stdin = sys.stdin.read() if "--interactive" in args and sys.stdin is not None else ""
    code, out, err = run_cli(args, stdin)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
