/** Bootstrap: load the scenario, build the store and panel, run the first chain. */

import { HttpMissionApi } from "./api.js";
import { WorkbenchPanel } from "./panel.js";
import { Workbench } from "./state.js";

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function start(): Promise<void> {
  const api = new HttpMissionApi("");
  const scenario = await api.scenario();
  const workbench = new Workbench(api, scenario);
  const panel = new WorkbenchPanel(workbench, {
    canvas: element<HTMLCanvasElement>("heatmap"),
    hover: element("hover"),
    badge: element("badge"),
    parameters: element("parameters"),
    table: element("report"),
    chart: element("chart"),
    error: element("error"),
  });
  void panel;

  element("explain").addEventListener("click", () => {
    void workbench.runExplanation("factorial");
  });
  element("optimize").addEventListener("click", async () => {
    const result = await workbench.runOptimizer();
    await workbench.applySuggestion(result);
  });

  await workbench.refresh();
}

void start().catch((err) => {
  const banner = document.getElementById("error");
  if (banner) banner.textContent = String(err);
});
