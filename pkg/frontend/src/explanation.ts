/** Presentation models for the explanation table and its cost chart. */

import type { Assignment, ReportRow, ScenarioSummary } from "./types.js";

export interface TableRow {
  label: string;
  assignment: Assignment;
  feasible: boolean;
  j: number | null;
  deltaJ: number | null;
  marker: string; // "" for feasible rows, the infeasible marker otherwise
}

/** "standard+day" style label, values in parameter declaration order. */
export function assignmentLabel(scenario: ScenarioSummary, assignment: Assignment): string {
  const parts = scenario.parameters.map((p) => assignment[p.name] ?? "?");
  return parts.join("+");
}

/** Rows sorted by cost ascending; infeasible rows go last, marked. */
export function tableModel(scenario: ScenarioSummary, rows: ReportRow[]): TableRow[] {
  const feasible = rows.filter((r) => r.feasible && r.j !== null);
  const infeasible = rows.filter((r) => !r.feasible || r.j === null);
  feasible.sort((a, b) => (a.j as number) - (b.j as number));
  const toRow = (r: ReportRow, marker: string): TableRow => ({
    label: assignmentLabel(scenario, r.assignment),
    assignment: r.assignment,
    feasible: r.feasible,
    j: r.j,
    deltaJ: r.delta_j,
    marker,
  });
  return [
    ...feasible.map((r) => toRow(r, "")),
    ...infeasible.map((r) => toRow(r, "no valid path")),
  ];
}

export interface Bar {
  label: string;
  j: number;
  fraction: number; // height relative to the costliest feasible row
}

/** Per-setting cost bars; infeasible settings have no bar (cost not shown). */
export function barModel(scenario: ScenarioSummary, rows: ReportRow[]): Bar[] {
  const feasible = rows.filter((r) => r.feasible && r.j !== null);
  const max = feasible.reduce((acc, r) => Math.max(acc, r.j as number), 0);
  return feasible.map((r) => ({
    label: assignmentLabel(scenario, r.assignment),
    j: r.j as number,
    fraction: max > 0 ? (r.j as number) / max : 0,
  }));
}
