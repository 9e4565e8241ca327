import { describe, expect, it } from "vitest";

import { Workbench } from "../src/state.js";
import { FixtureApi, GatedApi, scenarioFixture } from "./fixtures.js";

function workbench(api = new FixtureApi()) {
  return { api, bench: new Workbench(api, scenarioFixture) };
}

/** Keep releasing gated responses until the chain settles. */
async function drain(api: GatedApi, done: Promise<unknown>): Promise<void> {
  let finished = false;
  void done.finally(() => {
    finished = true;
  });
  for (let i = 0; i < 200 && !finished; i++) {
    api.releaseAll();
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
  if (!finished) throw new Error("chain did not settle");
}

describe("initial state", () => {
  it("adopts the scenario's current assignment and thresholds", () => {
    const { bench } = workbench();
    const state = bench.getState();
    expect(state.assignment).toEqual({ standard: "standard", day: "day" });
    expect(state.tJ).toBe(0.03);
    expect(state.tP).toBe(0.25);
    expect(state.badge).toBe("pending");
  });
});

describe("refresh chain", () => {
  it("lands landscape, plan and verdict with one shared digest", async () => {
    const { bench } = workbench();
    await bench.refresh();
    const state = bench.getState();
    expect(state.pml?.stale).toBe(false);
    expect(state.plan?.stale).toBe(false);
    expect(state.verdict?.stale).toBe(false);
    expect(state.badge).toBe("denied");
    expect(state.pml?.digest).toBe(state.plan?.digest);
    expect(state.pml?.digest).toBe(state.verdict?.digest);
  });

  it("runs exactly one request chain per input change", async () => {
    const { api, bench } = workbench();
    await bench.refresh();
    api.calls.length = 0;
    await bench.setParameter("day", "night");
    expect(api.calls).toEqual(["pml:standard_night", "plan:standard_night"]);
  });

  it("shows the distinct no-valid-path state on infeasible plans", async () => {
    const { bench } = workbench();
    await bench.setParameter("day", "night");
    const state = bench.getState();
    expect(state.badge).toBe("no-valid-path");
    expect(state.plan).toBeNull();
    expect(state.verdict).toBeNull();
    expect(state.pml?.stale).toBe(false); // landscape itself still displayed
  });

  it("marks previous results stale the moment an input changes", async () => {
    const api = new GatedApi(new FixtureApi());
    const bench = new Workbench(api, scenarioFixture);
    await drain(api, bench.refresh());
    expect(bench.getState().verdict?.stale).toBe(false);

    // setParameter marks everything stale synchronously, before any response.
    const second = bench.setParameter("standard", "special");
    const state = bench.getState();
    expect(state.pml?.stale).toBe(true);
    expect(state.verdict?.stale).toBe(true);
    expect(state.badge).toBe("pending");
    await drain(api, second);
    expect(bench.getState().verdict?.stale).toBe(false);
    expect(bench.getState().badge).toBe("cleared");
  });

  it("a newer input cancels the in-flight chain", async () => {
    const api = new GatedApi(new FixtureApi());
    const bench = new Workbench(api, scenarioFixture);

    const slow = bench.refresh(); // standard+day, held at the pml gate
    const fast = bench.setParameter("standard", "special");
    // Release everything; the first chain's responses arrive after the second
    // chain started and must be discarded.
    await drain(api, Promise.all([slow, fast]));
    const state = bench.getState();
    expect(state.assignment["standard"]).toBe("special");
    expect(state.pml?.value.assignment["standard"]).toBe("special");
    expect(state.badge).toBe("cleared");
  });
});

describe("explanation and optimizer", () => {
  it("stores the report tagged with the landscape digest", async () => {
    const { bench } = workbench();
    await bench.refresh();
    const report = await bench.runExplanation("factorial");
    expect(report?.rows).toHaveLength(4);
    const state = bench.getState();
    expect(state.report?.digest).toBe(state.pml?.digest);
    expect(state.report?.stale).toBe(false);
  });

  it("discards a report that raced a newer input", async () => {
    const gated = new GatedApi(new FixtureApi());
    const bench = new Workbench(gated, scenarioFixture);
    const pendingReport = bench.runExplanation("factorial");
    const refresh = bench.refresh(); // newer input invalidates the report
    await drain(gated, Promise.all([pendingReport, refresh]));
    expect(await pendingReport).toBeNull();
    expect(bench.getState().report).toBeNull();
  });

  it("applying the optimizer's suggestion reruns the chain on it", async () => {
    const { bench } = workbench();
    await bench.refresh();
    const result = await bench.runOptimizer();
    await bench.applySuggestion(result);
    const state = bench.getState();
    expect(state.assignment).toEqual(result.best_assignment);
    expect(state.badge).toBe("cleared");
  });
});
