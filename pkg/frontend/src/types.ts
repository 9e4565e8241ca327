/** Wire types for the mission-design service. Field names mirror the JSON. */

export type Assignment = Record<string, string>;

export interface ParameterSummary {
  name: string;
  domain: string[];
  current: string;
}

export interface GridSpec {
  origin: { lat: number; lon: number };
  width_cells: number;
  height_cells: number;
  cell_size: number;
}

export interface ScenarioSummary {
  parameters: ParameterSummary[];
  grid: GridSpec;
  thresholds: { t_j: number; t_p: number };
  start: [number, number];
  goal: [number, number];
  operator: [number, number];
  classes: string[];
  program_digest: string;
}

export interface PmlDocument {
  version: number;
  grid: GridSpec;
  query: string;
  assignment: Assignment;
  provenance: { program_digest: string; field_digest: string; seed: number };
  values: number[];
}

export interface PathDocument {
  version: number;
  /** Ordered via-points as [row, col, east, north]. */
  points: [number, number, number, number][];
  total_weight: number;
  j: number;
  pml_digest: string;
}

export interface Verdict {
  j: number;
  t_j: number;
  cleared: boolean;
  per_point: { cell: [number, number]; p: number }[];
}

export interface ReportRow {
  assignment: Assignment;
  feasible: boolean;
  j: number | null;
  delta_j: number | null;
  path_digest: string | null;
  error: string | null;
}

export interface ExplanationReport {
  version: number;
  mode: "oat" | "factorial";
  proposed: ReportRow;
  rows: ReportRow[];
}

export interface OptimizationResult {
  version: number;
  feasible: boolean;
  best_assignment: Assignment | null;
  best_j: number | null;
  evaluated: number;
  best_path: [number, number][] | null;
  digest?: string;
  best_path_document?: PathDocument;
}

/** Planning outcome: infeasibility is a normal state, not an error. */
export type PlanOutcome =
  | { feasible: true; path: PathDocument; j: number; digest: string }
  | { feasible: false; digest: string | null };

export interface TaggedPml {
  document: PmlDocument;
  digest: string;
}

export interface ApiFailure {
  status: number;
  code: string;
  message: string;
}
