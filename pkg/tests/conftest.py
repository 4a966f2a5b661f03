from __future__ import annotations

import json
from pathlib import Path

import pytest

ORACLE_PATH = Path(__file__).parent / "oracles" / "values.json"


@pytest.fixture(scope="session")
def oracle() -> dict:
    """Frozen mpmath reference values, see ``oracles/generate.py``."""
    return json.loads(ORACLE_PATH.read_text())
