/** Pure render model for the landscape heatmap.
 *
 * Row 0 of the raster is the southernmost grid row, so it is drawn at the
 * bottom of the canvas. All values shown (cell fill, hover readout) are taken
 * verbatim from the service's landscape document.
 */

import { probabilityCss } from "./colors.js";
import type { PathDocument, PmlDocument } from "./types.js";

export interface CellPaint {
  row: number;
  col: number;
  x: number; // pixel left
  y: number; // pixel top
  p: number;
  color: string;
  pruned: boolean;
}

export interface HeatmapModel {
  widthCells: number;
  heightCells: number;
  cellPixels: number;
  widthPixels: number;
  heightPixels: number;
  cells: CellPaint[];
}

export function heatmapModel(pml: PmlDocument, cellPixels = 20, tP = 0): HeatmapModel {
  const { width_cells: width, height_cells: height } = pml.grid;
  if (pml.values.length !== width * height) {
    throw new Error(
      `raster carries ${pml.values.length} values for a ${width}x${height} grid`,
    );
  }
  const cells: CellPaint[] = [];
  for (let row = 0; row < height; row++) {
    for (let col = 0; col < width; col++) {
      const p = pml.values[row * width + col];
      cells.push({
        row,
        col,
        x: col * cellPixels,
        y: (height - 1 - row) * cellPixels,
        p,
        color: probabilityCss(p),
        pruned: p < tP,
      });
    }
  }
  return {
    widthCells: width,
    heightCells: height,
    cellPixels,
    widthPixels: width * cellPixels,
    heightPixels: height * cellPixels,
    cells,
  };
}

export function cellAtPixel(
  model: HeatmapModel,
  px: number,
  py: number,
): CellPaint | null {
  if (px < 0 || py < 0 || px >= model.widthPixels || py >= model.heightPixels) {
    return null;
  }
  const col = Math.floor(px / model.cellPixels);
  const rowFromTop = Math.floor(py / model.cellPixels);
  const row = model.heightCells - 1 - rowFromTop;
  return model.cells[row * model.widthCells + col] ?? null;
}

/** Text shown next to the cursor; the number is the raster value verbatim. */
export function hoverReadout(cell: CellPaint): string {
  return `cell (${cell.row}, ${cell.col})  P = ${cell.p}`;
}

export interface OverlayPoint {
  x: number;
  y: number;
}

/** Pixel centers for a planned route, drawable as a polyline. */
export function pathOverlay(model: HeatmapModel, path: PathDocument): OverlayPoint[] {
  return path.points.map(([row, col]) => cellCenter(model, row, col));
}

export function cellCenter(model: HeatmapModel, row: number, col: number): OverlayPoint {
  return {
    x: col * model.cellPixels + model.cellPixels / 2,
    y: (model.heightCells - 1 - row) * model.cellPixels + model.cellPixels / 2,
  };
}

/** Marker positions for the start/goal cells. */
export function endpointOverlay(
  model: HeatmapModel,
  start: [number, number] | null,
  goal: [number, number] | null,
): { start: OverlayPoint | null; goal: OverlayPoint | null } {
  return {
    start: start ? cellCenter(model, start[0], start[1]) : null,
    goal: goal ? cellCenter(model, goal[0], goal[1]) : null,
  };
}
