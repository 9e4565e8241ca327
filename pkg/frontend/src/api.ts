/** HTTP client for the mission-design service.
 *
 * The workbench never computes probabilities; every number it shows comes
 * through this interface. Tests substitute a fixture-backed implementation.
 */

import type {
  Assignment,
  ExplanationReport,
  OptimizationResult,
  PathDocument,
  PlanOutcome,
  ScenarioSummary,
  TaggedPml,
  Verdict,
} from "./types.js";

export interface MissionApi {
  scenario(): Promise<ScenarioSummary>;
  pml(assignment: Assignment, signal?: AbortSignal): Promise<TaggedPml>;
  plan(assignment: Assignment, signal?: AbortSignal): Promise<PlanOutcome>;
  clearance(
    assignment: Assignment,
    path: PathDocument,
    signal?: AbortSignal,
  ): Promise<{ verdict: Verdict; digest: string }>;
  explain(
    assignment: Assignment,
    mode: "oat" | "factorial",
    signal?: AbortSignal,
  ): Promise<ExplanationReport>;
  optimize(signal?: AbortSignal): Promise<OptimizationResult>;
}

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function parseFailure(response: Response): Promise<ServiceError> {
  let code = "HttpError";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // keep the generic message
  }
  return new ServiceError(response.status, code, message);
}

export class HttpMissionApi implements MissionApi {
  constructor(private readonly base: string = "") {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.base + path, { signal });
    if (!response.ok) throw await parseFailure(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!response.ok) throw await parseFailure(response);
    return (await response.json()) as T;
  }

  scenario(): Promise<ScenarioSummary> {
    return this.get("/api/scenario");
  }

  async pml(assignment: Assignment, signal?: AbortSignal): Promise<TaggedPml> {
    const body = await this.post<{ pml: TaggedPml["document"]; digest: string }>(
      "/api/pml",
      { assignment },
      signal,
    );
    return { document: body.pml, digest: body.digest };
  }

  async plan(assignment: Assignment, signal?: AbortSignal): Promise<PlanOutcome> {
    try {
      const body = await this.post<{ path: PathDocument; j: number; digest: string }>(
        "/api/plan",
        { assignment },
        signal,
      );
      return { feasible: true, path: body.path, j: body.j, digest: body.digest };
    } catch (err) {
      if (err instanceof ServiceError && err.code === "Infeasible") {
        return { feasible: false, digest: null };
      }
      throw err;
    }
  }

  async clearance(assignment: Assignment, path: PathDocument, signal?: AbortSignal) {
    return this.post<{ verdict: Verdict; digest: string }>(
      "/api/clearance",
      { assignment, path },
      signal,
    );
  }

  async explain(assignment: Assignment, mode: "oat" | "factorial", signal?: AbortSignal) {
    const body = await this.post<{ report: ExplanationReport }>(
      "/api/explain",
      { assignment, mode },
      signal,
    );
    return body.report;
  }

  async optimize(signal?: AbortSignal): Promise<OptimizationResult> {
    return this.post("/api/optimize", {}, signal);
  }
}
