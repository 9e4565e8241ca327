"""Bundled scenario fixture: rule program, synthetic map, class mapping, scenario."""

from pathlib import Path

_HERE = Path(__file__).parent


def listing_path() -> Path:
    return _HERE / "listing.pl"


def listing_text() -> str:
    return listing_path().read_text(encoding="utf-8")


def scenario_path() -> Path:
    return _HERE / "scenario.yaml"


def map_path() -> Path:
    return _HERE / "map.json"


def class_mapping_path() -> Path:
    return _HERE / "classes.yaml"
