import json
import os
from pathlib import Path

import pytest

DATA_DIR = Path(os.environ.get("HAMFLOW_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def fixture_costs():
    return json.loads((DATA_DIR / "case_study_costs.json").read_text())
