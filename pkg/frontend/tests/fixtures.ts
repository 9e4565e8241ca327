/** Recorded service responses and a MissionApi implementation over them. */

import { readFileSync } from "node:fs";

import type { MissionApi } from "../src/api.js";
import type {
  Assignment,
  ExplanationReport,
  OptimizationResult,
  PathDocument,
  PlanOutcome,
  PmlDocument,
  ScenarioSummary,
  TaggedPml,
  Verdict,
} from "../src/types.js";

interface Recorded<T> {
  status: number;
  body: T;
}

export function fixture<T>(name: string): Recorded<T> {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as Recorded<T>;
}

export function fixtureCsv(name: string): number[][] {
  const url = new URL(`./fixtures/${name}.csv`, import.meta.url);
  return readFileSync(url, "utf-8")
    .trim()
    .split("\n")
    .map((line) => line.split(",").map((token) => Number(token)));
}

export const scenarioFixture = fixture<ScenarioSummary>("scenario").body;

function assignmentKey(assignment: Assignment): string {
  return `${assignment["standard"]}_${assignment["day"]}`;
}

/** Replays the recorded responses; unknown requests fail loudly. */
export class FixtureApi implements MissionApi {
  calls: string[] = [];

  async scenario(): Promise<ScenarioSummary> {
    this.calls.push("scenario");
    return scenarioFixture;
  }

  async pml(assignment: Assignment): Promise<TaggedPml> {
    const key = assignmentKey(assignment);
    this.calls.push(`pml:${key}`);
    const recorded = fixture<{ pml: PmlDocument; digest: string }>(`pml_${key}`);
    return { document: recorded.body.pml, digest: recorded.body.digest };
  }

  async plan(assignment: Assignment): Promise<PlanOutcome> {
    const key = assignmentKey(assignment);
    this.calls.push(`plan:${key}`);
    const recorded = fixture<InstanceType<typeof Object>>(`plan_${key}`);
    if (recorded.status === 422) {
      return { feasible: false, digest: null };
    }
    const body = recorded.body as { path: PathDocument; j: number; digest: string };
    return { feasible: true, path: body.path, j: body.j, digest: body.digest };
  }

  async clearance(
    assignment: Assignment,
    _path: PathDocument,
  ): Promise<{ verdict: Verdict; digest: string }> {
    const key = assignmentKey(assignment);
    this.calls.push(`clearance:${key}`);
    return fixture<{ verdict: Verdict; digest: string }>(`clearance_${key}`).body;
  }

  async explain(
    _assignment: Assignment,
    mode: "oat" | "factorial",
  ): Promise<ExplanationReport> {
    this.calls.push(`explain:${mode}`);
    return fixture<{ report: ExplanationReport }>(`explain_${mode}`).body.report;
  }

  async optimize(): Promise<OptimizationResult> {
    this.calls.push("optimize");
    return fixture<OptimizationResult>("optimize").body;
  }
}

type Release = () => void;

/** Wraps an api so each call blocks until released; drives cancellation tests. */
export class GatedApi implements MissionApi {
  private gates: Release[] = [];

  constructor(private readonly inner: MissionApi) {}

  releaseAll(): void {
    const gates = this.gates;
    this.gates = [];
    for (const release of gates) release();
  }

  get pending(): number {
    return this.gates.length;
  }

  private gate<T>(value: Promise<T>): Promise<T> {
    return new Promise((resolve, reject) => {
      this.gates.push(() => value.then(resolve, reject));
    });
  }

  scenario() {
    return this.inner.scenario();
  }

  pml(assignment: Assignment, signal?: AbortSignal) {
    return this.gate(this.inner.pml(assignment, signal));
  }

  plan(assignment: Assignment, signal?: AbortSignal) {
    return this.gate(this.inner.plan(assignment, signal));
  }

  clearance(assignment: Assignment, path: PathDocument, signal?: AbortSignal) {
    return this.gate(this.inner.clearance(assignment, path, signal));
  }

  explain(assignment: Assignment, mode: "oat" | "factorial", signal?: AbortSignal) {
    return this.gate(this.inner.explain(assignment, mode, signal));
  }

  optimize(signal?: AbortSignal) {
    return this.gate(this.inner.optimize(signal));
  }
}
