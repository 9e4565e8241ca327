"""Shared fixtures: the bundled scenario engine is expensive enough to share."""

import pytest

from pmd import data
from pmd.scenario import ScenarioEngine, load_scenario


@pytest.fixture(scope="session")
def bundled_scenario():
    return load_scenario(data.scenario_path())


@pytest.fixture(scope="session")
def bundled_engine(bundled_scenario):
    return ScenarioEngine(bundled_scenario)
