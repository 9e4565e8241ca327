"""Command-line tool: landscapes, planning, clearance, explanation, optimization.

Machine-readable documents go to stdout, logs to stderr. Exit codes: 0 ok or
cleared, 1 usage error, 2 denied or infeasible, 3 compute error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .ceo import Mission, clearance
from .landscape import load_pml, pml_to_csv, save_pml
from .planner import build_graph, path_from_dict, path_to_dict, shortest_path
from .scenario import ScenarioEngine, ScenarioError, load_scenario
from .util import pretty_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DENIED = 2
EXIT_COMPUTE = 3


class Denied(Exception):
    """Mission denied or infeasible; maps to exit code 2."""


def _log(message: str):
    print(message, file=sys.stderr)


def _engine(scenario_path: str) -> ScenarioEngine:
    return ScenarioEngine(load_scenario(scenario_path))


def _parse_assignment(pairs: tuple[str, ...]) -> dict[str, str]:
    assignment = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"assignment must look like name=value, got {pair!r}")
        name, value = pair.split("=", 1)
        assignment[name.strip()] = value.strip()
    return assignment


@click.group()
def cli():
    """Probabilistic mission design tools."""


@cli.command("pml")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--assignment", "assignments", multiple=True, help="parameter=value override")
@click.option("--query", "query_text", default=None, help="query atom, e.g. 'local_rules(X, Y)'")
@click.option("--out", "out_path", type=click.Path(), help="write the document (and a CSV) here")
def pml_command(scenario_path, assignments, query_text, out_path):
    """Compute and print the mission landscape."""
    from .landscape import DEFAULT_QUERY, parse_query

    engine = _engine(scenario_path)
    query = parse_query(query_text) if query_text else DEFAULT_QUERY
    pml = engine.landscape(_parse_assignment(assignments), query)
    document = save_pml(pml)
    if out_path:
        out = Path(out_path)
        out.write_text(document, encoding="utf-8")
        csv_path = out.with_suffix(".csv")
        csv_path.write_text(pml_to_csv(pml), encoding="utf-8")
        _log(f"wrote {out} and {csv_path}")
    click.echo(document, nl=False)


@cli.command("plan")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--pml", "pml_path", type=click.Path(exists=True), help="reuse a saved landscape")
@click.option("--assignment", "assignments", multiple=True)
@click.option("--out", "out_path", type=click.Path())
def plan_command(scenario_path, pml_path, assignments, out_path):
    """Plan the minimum-violation route between the scenario's start and goal."""
    engine = _engine(scenario_path)
    if pml_path:
        pml = load_pml(Path(pml_path).read_text(encoding="utf-8"))
    else:
        pml = engine.landscape(_parse_assignment(assignments))
    start = engine.scenario.grid.snap(engine.scenario.start)
    goal = engine.scenario.grid.snap(engine.scenario.goal)
    path = shortest_path(build_graph(pml, engine.t_p), start, goal)
    if path is None:
        click.echo(pretty_json({"feasible": False}), nl=False)
        raise Denied("no path survives pruning")
    doc = path_to_dict(path, pml)
    text = pretty_json(doc)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        _log(f"wrote {out_path}")
    click.echo(text, nl=False)


@cli.command("clear")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--pml", "pml_path", required=True, type=click.Path(exists=True))
@click.option("--path", "path_path", required=True, type=click.Path(exists=True))
def clear_command(scenario_path, pml_path, path_path):
    """Check clearance of a saved path against a saved landscape."""
    engine = _engine(scenario_path)
    pml = load_pml(Path(pml_path).read_text(encoding="utf-8"))
    path_doc = json.loads(Path(path_path).read_text(encoding="utf-8"))
    recorded = path_doc.get("pml_digest")
    if recorded is not None and recorded != pml.digest():
        raise ValueError(
            "path was planned on a different landscape "
            f"(path carries {recorded[:12]}…, landscape is {pml.digest()[:12]}…)"
        )
    path = path_from_dict(path_doc, pml)
    mission = Mission.from_path(path, pml.assignment)
    verdict = clearance(mission, pml, engine.t_j)
    click.echo(pretty_json(verdict.to_dict()), nl=False)
    if not verdict.cleared:
        raise Denied(f"J={float(verdict.j)} is not below t_j={engine.t_j}")


@cli.command("explain")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["oat", "factorial"]), default="oat")
@click.option("--assignment", "assignments", multiple=True)
def explain_command(scenario_path, mode, assignments):
    """Tabulate the effect of each mission-parameter variation."""
    engine = _engine(scenario_path)
    report = engine.explain(_parse_assignment(assignments), mode)
    click.echo(pretty_json(report.to_dict()), nl=False)


@cli.command("optimize")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
def optimize_command(scenario_path):
    """Search all parameter assignments for the cheapest cleared route."""
    engine = _engine(scenario_path)
    result = engine.optimize()
    click.echo(pretty_json(result.to_dict()), nl=False)
    if not result.feasible:
        raise Denied("every assignment is infeasible")


@cli.command("serve")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_command(scenario_path, port, host):
    """Serve the HTTP API for the workbench."""
    import uvicorn

    from .service import create_app

    engine = _engine(scenario_path)
    _log(f"serving scenario {scenario_path} on {host}:{port}")
    uvicorn.run(create_app(engine), host=host, port=port, log_level="warning")


@cli.command("fetch-map")
@click.option("--bbox", required=True, help="south,west,north,east in degrees")
@click.option("--mapping", "mapping_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--endpoint", default=None, help="Overpass URL (default: $PMD_OVERPASS_URL)")
def fetch_map_command(bbox, mapping_path, out_path, endpoint):
    """Fetch map data from an Overpass endpoint (network access required)."""
    from .geodata import fetch_overpass, load_class_mapping

    parts = [float(v) for v in bbox.split(",")]
    if len(parts) != 4:
        raise click.UsageError("bbox needs four comma-separated degrees")
    mapping = load_class_mapping(mapping_path)
    text = fetch_overpass(mapping, tuple(parts), endpoint)
    Path(out_path).write_text(text, encoding="utf-8")
    _log(f"wrote {out_path}")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code table."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except Denied as err:
        _log(f"denied: {err}")
        return EXIT_DENIED
    except click.UsageError as err:
        _log(f"usage error: {err.format_message()}")
        return EXIT_USAGE
    except click.exceptions.Exit as err:
        return int(err.exit_code)
    except click.Abort:
        return EXIT_USAGE
    except (ScenarioError, OSError, ValueError, KeyError) as err:
        _log(f"error: {err}")
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
