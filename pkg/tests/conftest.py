import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def world2_source() -> str:
    return (FIXTURES / "world2.json").read_text()


@pytest.fixture(scope="session")
def market42_source() -> str:
    return (FIXTURES / "market42.json").read_text()


@pytest.fixture(scope="session")
def world2_path() -> str:
    return str(FIXTURES / "world2.json")


@pytest.fixture(scope="session")
def market42_path() -> str:
    return str(FIXTURES / "market42.json")


@pytest.fixture
def population_model() -> str:
    """Smallest feedback stock-flow pair plus an outside influence."""
    return json.dumps({"variables": [
        {"name": "Population", "kind": "stock", "depends_on": [],
         "inflows": ["births"], "outflows": ["deaths"]},
        {"name": "births", "kind": "flow", "depends_on": ["Population"]},
        {"name": "deaths", "kind": "flow", "depends_on": ["Population", "crowding"]},
        {"name": "crowding", "kind": "auxiliary", "depends_on": ["Population"]},
    ]})


@pytest.fixture
def three_stock_chain() -> str:
    """Linear chain S1 -> S2 -> S3 through two flows."""
    return json.dumps({"variables": [
        {"name": "S1", "kind": "stock", "outflows": ["f12"]},
        {"name": "f12", "kind": "flow", "depends_on": ["S1"]},
        {"name": "S2", "kind": "stock", "inflows": ["f12"], "outflows": ["f23"]},
        {"name": "f23", "kind": "flow", "depends_on": ["S2"]},
        {"name": "S3", "kind": "stock", "inflows": ["f23"]},
    ]})
