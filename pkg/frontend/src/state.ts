/** Workbench view state and the recompute chain.
 *
 * Any input change (parameter toggle, start/goal move) marks the displayed
 * results stale and starts one request chain: landscape -> plan -> clearance.
 * A newer input cancels the in-flight chain; only the freshest chain may
 * write results. Every stored result carries the provenance digest of the
 * landscape it was computed against.
 */

import type { MissionApi } from "./api.js";
import type {
  Assignment,
  ExplanationReport,
  OptimizationResult,
  PathDocument,
  PmlDocument,
  ScenarioSummary,
  Verdict,
} from "./types.js";

export type Badge = "pending" | "cleared" | "denied" | "no-valid-path" | "error";

export interface Tagged<T> {
  value: T;
  digest: string;
  stale: boolean;
}

export interface ViewState {
  assignment: Assignment;
  startCell: [number, number] | null;
  goalCell: [number, number] | null;
  tJ: number;
  tP: number;
  pml: Tagged<PmlDocument> | null;
  plan: Tagged<PathDocument> | null;
  verdict: Tagged<Verdict> | null;
  report: Tagged<ExplanationReport> | null;
  badge: Badge;
  busy: boolean;
  error: string | null;
}

type Listener = (state: ViewState) => void;

export class Workbench {
  private readonly api: MissionApi;
  readonly scenario: ScenarioSummary;
  private state: ViewState;
  private listeners: Listener[] = [];
  private chainToken = 0;
  private controller: AbortController | null = null;

  constructor(api: MissionApi, scenario: ScenarioSummary) {
    this.api = api;
    this.scenario = scenario;
    const assignment: Assignment = {};
    for (const parameter of scenario.parameters) {
      assignment[parameter.name] = parameter.current;
    }
    this.state = {
      assignment,
      startCell: null,
      goalCell: null,
      tJ: scenario.thresholds.t_j,
      tP: scenario.thresholds.t_p,
      pml: null,
      plan: null,
      verdict: null,
      report: null,
      badge: "pending",
      busy: false,
      error: null,
    };
  }

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private markStale(): void {
    const stale = <T>(tagged: Tagged<T> | null): Tagged<T> | null =>
      tagged ? { ...tagged, stale: true } : null;
    this.update({
      pml: stale(this.state.pml),
      plan: stale(this.state.plan),
      verdict: stale(this.state.verdict),
      report: stale(this.state.report),
      badge: "pending",
    });
  }

  /** Toggle one mission parameter and rerun the chain. */
  setParameter(name: string, value: string): Promise<void> {
    const parameter = this.scenario.parameters.find((p) => p.name === name);
    if (!parameter) throw new Error(`unknown parameter ${name}`);
    if (!parameter.domain.includes(value)) {
      throw new Error(`${value} is not in the domain of ${name}`);
    }
    this.update({ assignment: { ...this.state.assignment, [name]: value } });
    return this.refresh();
  }

  /** Adopt the optimizer's suggested assignment and rerun the chain. */
  applySuggestion(result: OptimizationResult): Promise<void> {
    if (!result.feasible || !result.best_assignment) {
      return Promise.resolve();
    }
    this.update({ assignment: { ...result.best_assignment } });
    return this.refresh();
  }

  /** Run landscape -> plan -> clearance; newest input wins. */
  async refresh(): Promise<void> {
    this.markStale();
    const token = ++this.chainToken;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const current = () => token === this.chainToken;
    this.update({ busy: true, error: null });
    const assignment = { ...this.state.assignment };
    try {
      const pml = await this.api.pml(assignment, controller.signal);
      if (!current()) return;
      this.update({ pml: { value: pml.document, digest: pml.digest, stale: false } });

      const plan = await this.api.plan(assignment, controller.signal);
      if (!current()) return;
      if (!plan.feasible) {
        this.update({
          plan: null,
          verdict: null,
          badge: "no-valid-path",
          busy: false,
        });
        return;
      }
      this.update({ plan: { value: plan.path, digest: plan.digest, stale: false } });

      const cleared = await this.api.clearance(assignment, plan.path, controller.signal);
      if (!current()) return;
      this.update({
        verdict: { value: cleared.verdict, digest: cleared.digest, stale: false },
        badge: cleared.verdict.cleared ? "cleared" : "denied",
        busy: false,
      });
    } catch (err) {
      if (!current()) return;
      if (err instanceof DOMException && err.name === "AbortError") return;
      this.update({ badge: "error", busy: false, error: String(err) });
    }
  }

  /** Fetch an explanation table for the active assignment. */
  async runExplanation(mode: "oat" | "factorial"): Promise<ExplanationReport | null> {
    const token = this.chainToken;
    const assignment = { ...this.state.assignment };
    const report = await this.api.explain(assignment, mode);
    if (token !== this.chainToken) return null; // input changed meanwhile
    const digest = this.state.pml?.digest ?? "";
    this.update({ report: { value: report, digest, stale: false } });
    return report;
  }

  runOptimizer(): Promise<OptimizationResult> {
    return this.api.optimize();
  }

  setPruningThreshold(tP: number): void {
    this.update({ tP });
  }
}
