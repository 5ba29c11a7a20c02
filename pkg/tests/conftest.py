from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

# (treebank stem, language); every one has a matching <stem>.um.tsv table
TABLE_FIXTURES = [
    ("es_tiny", "es"),
    ("es_recall", "es"),
    ("es_medium", "es"),
    ("fr_tiny", "fr"),
    ("hu_tiny", "hu"),
    ("de_tiny", "de"),
    ("eu_tiny", "eu"),
    ("ga_tiny", "ga"),
    ("excluded_pos", "es"),
]

CONLLU_FIXTURES = sorted(FIXTURES.glob("*.conllu"))


def conllu(stem: str) -> Path:
    return FIXTURES / f"{stem}.conllu"


def table(stem: str) -> Path:
    return FIXTURES / f"{stem}.um.tsv"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


# One pass/fail line per acceptance criterion, filled in by test_acceptance.py
# and repeated in the terminal summary.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
