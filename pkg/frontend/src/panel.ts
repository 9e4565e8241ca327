/** DOM wiring: paints the heatmap canvas, parameter toggles, verdict badge,
 * and the explanation table. All numbers come from the view state, which in
 * turn only holds service responses.
 */

import { barModel, tableModel } from "./explanation.js";
import {
  cellAtPixel,
  endpointOverlay,
  heatmapModel,
  hoverReadout,
  pathOverlay,
  type HeatmapModel,
} from "./heatmap.js";
import type { ViewState, Workbench } from "./state.js";

const CELL_PIXELS = 22;

export class WorkbenchPanel {
  private model: HeatmapModel | null = null;

  constructor(
    private readonly workbench: Workbench,
    private readonly root: {
      canvas: HTMLCanvasElement;
      hover: HTMLElement;
      badge: HTMLElement;
      parameters: HTMLElement;
      table: HTMLElement;
      chart: HTMLElement;
      error: HTMLElement;
    },
  ) {
    workbench.subscribe((state) => this.render(state));
    this.root.canvas.addEventListener("mousemove", (event) => this.onHover(event));
    this.renderParameters(workbench.getState());
  }

  private onHover(event: MouseEvent): void {
    if (!this.model) return;
    const bounds = this.root.canvas.getBoundingClientRect();
    const cell = cellAtPixel(
      this.model,
      event.clientX - bounds.left,
      event.clientY - bounds.top,
    );
    this.root.hover.textContent = cell ? hoverReadout(cell) : "";
  }

  private render(state: ViewState): void {
    try {
      this.renderBadge(state);
      this.renderHeatmap(state);
      this.renderParameters(state);
      this.renderReport(state);
      this.root.error.textContent = state.error ?? "";
    } catch (err) {
      // e.g. a raster that disagrees with its grid; keep the page alive.
      this.root.error.textContent = String(err);
    }
  }

  private renderBadge(state: ViewState): void {
    const badge = this.root.badge;
    badge.dataset.badge = state.badge;
    badge.classList.toggle("stale", state.verdict?.stale ?? false);
    const text = {
      pending: "…",
      cleared: "cleared",
      denied: "denied",
      "no-valid-path": "no valid path",
      error: "error",
    }[state.badge];
    const j = state.verdict && state.badge !== "pending" ? ` (J = ${state.verdict.value.j})` : "";
    badge.textContent = text + j;
  }

  private renderHeatmap(state: ViewState): void {
    if (!state.pml) return;
    const model = heatmapModel(state.pml.value, CELL_PIXELS, state.tP);
    this.model = model;
    const canvas = this.root.canvas;
    canvas.width = model.widthPixels;
    canvas.height = model.heightPixels;
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    ctx.globalAlpha = state.pml.stale ? 0.45 : 1.0;
    for (const cell of model.cells) {
      ctx.fillStyle = cell.color;
      ctx.fillRect(cell.x, cell.y, model.cellPixels, model.cellPixels);
      if (cell.pruned) {
        ctx.fillStyle = "rgba(20, 20, 28, 0.55)";
        ctx.fillRect(cell.x, cell.y, model.cellPixels, model.cellPixels);
      }
    }
    if (state.plan && !state.plan.stale) {
      const points = pathOverlay(model, state.plan.value);
      ctx.strokeStyle = "#f2f2f2";
      ctx.lineWidth = 3;
      ctx.beginPath();
      points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
      ctx.stroke();
    }
    const grid = state.pml.value.grid;
    const toCell = (pos: [number, number]): [number, number] => [
      Math.floor(pos[1] / grid.cell_size),
      Math.floor(pos[0] / grid.cell_size),
    ];
    const { start, goal } = endpointOverlay(
      model,
      toCell(this.workbench.scenario.start),
      toCell(this.workbench.scenario.goal),
    );
    for (const [point, color] of [
      [start, "#3fa7ff"],
      [goal, "#ff5470"],
    ] as const) {
      if (!point) continue;
      ctx.fillStyle = color;
      ctx.beginPath();
      ctx.arc(point.x, point.y, model.cellPixels * 0.35, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.globalAlpha = 1.0;
  }

  private renderParameters(state: ViewState): void {
    const host = this.root.parameters;
    host.replaceChildren();
    if (this.workbench.scenario.parameters.length === 0) {
      const hint = document.createElement("p");
      hint.className = "hint";
      hint.textContent = "This scenario has no mission parameters to vary.";
      host.append(hint);
      return;
    }
    for (const parameter of this.workbench.scenario.parameters) {
      const group = document.createElement("fieldset");
      const legend = document.createElement("legend");
      legend.textContent = parameter.name;
      group.append(legend);
      for (const value of parameter.domain) {
        const button = document.createElement("button");
        button.textContent = value;
        button.disabled = state.busy;
        button.classList.toggle("active", state.assignment[parameter.name] === value);
        button.addEventListener("click", () => {
          void this.workbench.setParameter(parameter.name, value);
        });
        group.append(button);
      }
      host.append(group);
    }
  }

  private renderReport(state: ViewState): void {
    const host = this.root.table;
    const chart = this.root.chart;
    host.replaceChildren();
    chart.replaceChildren();
    if (!state.report) return;
    host.classList.toggle("stale", state.report.stale);
    const rows = tableModel(this.workbench.scenario, state.report.value.rows);
    const table = document.createElement("table");
    table.innerHTML =
      "<thead><tr><th>setting</th><th>J</th><th>ΔJ</th><th></th></tr></thead>";
    const body = document.createElement("tbody");
    for (const row of rows) {
      const tr = document.createElement("tr");
      tr.classList.toggle("infeasible", !row.feasible);
      const cells = [
        row.label,
        row.j === null ? "—" : String(row.j),
        row.deltaJ === null ? "—" : String(row.deltaJ),
        row.marker,
      ];
      for (const text of cells) {
        const td = document.createElement("td");
        td.textContent = text;
        tr.append(td);
      }
      body.append(tr);
    }
    table.append(body);
    host.append(table);

    for (const bar of barModel(this.workbench.scenario, state.report.value.rows)) {
      const column = document.createElement("div");
      column.className = "bar";
      column.style.height = `${Math.max(4, Math.round(bar.fraction * 120))}px`;
      column.title = `${bar.label}: J = ${bar.j}`;
      const label = document.createElement("span");
      label.textContent = bar.label;
      column.append(label);
      chart.append(column);
    }
  }
}
