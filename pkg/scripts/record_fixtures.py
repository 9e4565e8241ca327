#!/usr/bin/env python3
"""Record service responses for the workbench's offline test suite.

Runs the HTTP app in-process against the bundled scenario and saves each
response (status + body) under frontend/tests/fixtures/, plus the CSV export
of the default landscape. The workbench tests replay these documents instead
of talking to a live server.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from pmd import data
from pmd.landscape import pml_to_csv
from pmd.scenario import ScenarioEngine, load_scenario
from pmd.service import create_app

OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    engine = ScenarioEngine(load_scenario(data.scenario_path()))
    client = TestClient(create_app(engine), raise_server_exceptions=False)

    def record(name: str, response):
        payload = {"status": response.status_code, "body": response.json()}
        (OUT / f"{name}.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"recorded {name}.json ({response.status_code})")

    record("scenario", client.get("/api/scenario"))

    standard = {"assignment": {"standard": "standard", "day": "day"}}
    special = {"assignment": {"standard": "special", "day": "day"}}
    night = {"assignment": {"standard": "standard", "day": "night"}}

    record("pml_standard_day", client.post("/api/pml", json=standard))
    record("pml_special_day", client.post("/api/pml", json=special))
    record("pml_standard_night", client.post("/api/pml", json=night))

    plan_standard = client.post("/api/plan", json=standard)
    record("plan_standard_day", plan_standard)
    plan_special = client.post("/api/plan", json=special)
    record("plan_special_day", plan_special)
    record("plan_standard_night", client.post("/api/plan", json=night))

    record(
        "clearance_standard_day",
        client.post(
            "/api/clearance", json={**standard, "path": plan_standard.json()["path"]}
        ),
    )
    record(
        "clearance_special_day",
        client.post(
            "/api/clearance", json={**special, "path": plan_special.json()["path"]}
        ),
    )

    record("explain_factorial", client.post("/api/explain", json={**standard, "mode": "factorial"}))
    record("explain_oat", client.post("/api/explain", json={**standard, "mode": "oat"}))
    record("optimize", client.post("/api/optimize", json={}))

    csv_text = pml_to_csv(engine.landscape(standard["assignment"]))
    (OUT / "pml_standard_day.csv").write_text(csv_text, encoding="utf-8")
    print("recorded pml_standard_day.csv")


if __name__ == "__main__":
    main()
