/** DOM wiring for the explorer. All rendering/scheduling logic lives in the
 * importable modules; this file only connects it to the page.
 */

import { Client, ApiError } from "./api.js";
import { diffIsConsistent, renderStates, type PointState } from "./diff.js";
import { RadiusScheduler } from "./radius.js";
import { Viewport, drawScatter, pickPoint, type ScatterPoint } from "./scatter.js";
import { buildTableModel, euclideanOfStrings } from "./table.js";
import type { DatasetPoints, DiffPayload, Solution, ZoomResponse } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const client = new Client("");
const canvas = $<HTMLCanvasElement>("scatter");
const ctx = canvas.getContext("2d");
const status = $<HTMLDivElement>("status");
const tableHost = $<HTMLDivElement>("table-host");
const radiusSlider = $<HTMLInputElement>("radius-slider");
const radiusReadout = $<HTMLSpanElement>("radius-readout");

let dataset: DatasetPoints | null = null;
let points: ScatterPoint[] = [];
let solution: Solution | null = null;
let states: Map<number, PointState> | null = null;
let lastDiff: DiffPayload | null = null;
let focusCircle: { x: number; y: number; r: number } | null = null;
let view = new Viewport(canvas.width, canvas.height);

function say(text: string, isError = false): void {
  status.textContent = text;
  status.className = isError ? "error" : "";
}

function redraw(): void {
  if (!ctx) return;
  if (!dataset || dataset.kind !== "numeric" || dataset.d !== 2) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  drawScatter(ctx, view, {
    points,
    selected: new Set(solution?.ids ?? []),
    radius: solution?.radius ?? null,
    states,
    focus: focusCircle,
  });
}

function tableFallbackActive(): boolean {
  return !!dataset && (dataset.kind === "categorical" || dataset.d !== 2);
}

function renderTable(): void {
  if (!dataset || !solution || !tableFallbackActive()) {
    tableHost.innerHTML = "";
    return;
  }
  // categorical data keeps verbatim labels; higher-dimensional numeric data
  // falls back to the same table with printed coordinates
  const labels = dataset.labels
    ?? (dataset.coords ?? []).map((row) => row.map((v) => v.toFixed(4)));
  const dist = dataset.labels ? undefined : euclideanOfStrings;
  const rows = buildTableModel(dataset.ids, labels, solution.ids, solution.radius, dist);
  const html = rows.map((r) =>
    `<tr class="${r.selected ? "sel" : r.indent ? "indent" : ""}">` +
    `<td>${r.indent ? "&nbsp;&nbsp;&nbsp;" : ""}${r.id}</td>` +
    r.labels.map((l) => `<td>${l}</td>`).join("") + "</tr>").join("");
  tableHost.innerHTML = `<table><tbody>${html}</tbody></table>`;
}

function applySolution(sol: Solution, diff: DiffPayload | null): void {
  solution = sol;
  lastDiff = diff;
  states = dataset ? renderStates(dataset.ids, sol.ids, diff) : null;
  radiusSlider.value = String(sol.radius);
  radiusReadout.textContent = sol.radius.toFixed(4);
  renderTable();
  redraw();
}

const scheduler = new RadiusScheduler<ZoomResponse>(
  (r) => {
    if (!solution) throw new Error("no active solution");
    return client.zoom(solution.id, r);
  },
  () => solution?.radius ?? NaN,
  ({ value }) => {
    if (lastDiffConsistent(value)) {
      focusCircle = null;
      applySolution(value, value.diff);
      say(`radius ${value.radius.toFixed(4)}: ${value.size} objects ` +
          `(+${value.diff.added.length} / -${value.diff.removed.length})`);
    }
  },
  (err) => say(err instanceof ApiError ? err.message : String(err), true),
  (busy) => {
    $<HTMLButtonElement>("solve").disabled = busy;
    radiusSlider.classList.toggle("busy", busy);
  },
);

function lastDiffConsistent(z: ZoomResponse): boolean {
  if (!solution) return true;
  if (!diffIsConsistent(z.diff, solution.ids, z.ids)) {
    say("service diff does not partition the id sets", true);
    return false;
  }
  return true;
}

$<HTMLButtonElement>("load").addEventListener("click", async () => {
  try {
    const kind = $<HTMLSelectElement>("gen-type").value as "uniform" | "clustered";
    const n = Number($<HTMLInputElement>("gen-n").value);
    const seed = Number($<HTMLInputElement>("gen-seed").value);
    const summary = await client.generateDataset({ type: kind, n, d: 2, seed });
    dataset = await client.datasetPoints(summary.id);
    points = (dataset.coords ?? []).map((c, i) => ({
      id: dataset!.ids[i] ?? i, x: c[0] ?? 0, y: c[1] ?? 0,
    }));
    solution = null;
    states = null;
    focusCircle = null;
    view = new Viewport(canvas.width, canvas.height);
    say(`dataset ${summary.id.slice(0, 8)}: n=${summary.n}`);
    redraw();
  } catch (err) {
    say(String(err), true);
  }
});

$<HTMLButtonElement>("solve").addEventListener("click", async () => {
  if (!dataset) return say("load a dataset first", true);
  try {
    const r = Number(radiusSlider.value);
    const algorithm = $<HTMLSelectElement>("algorithm").value;
    const sol = await client.solve(dataset.id, r, algorithm);
    focusCircle = null;
    applySolution(sol, null);
    say(`${algorithm} at r=${r}: ${sol.size} objects`);
  } catch (err) {
    say(String(err), true);
  }
});

radiusSlider.addEventListener("input", () => {
  radiusReadout.textContent = Number(radiusSlider.value).toFixed(4);
});
radiusSlider.addEventListener("change", () => {
  if (!solution) return;
  scheduler.intend(Number(radiusSlider.value));
});

// viewport: drag pans, wheel zooms; a short click picks a point for local zoom
let dragStart: [number, number] | null = null;
let dragged = false;
canvas.addEventListener("mousedown", (ev) => {
  dragStart = [ev.offsetX, ev.offsetY];
  dragged = false;
});
canvas.addEventListener("mousemove", (ev) => {
  if (!dragStart) return;
  const dx = ev.offsetX - dragStart[0];
  const dy = ev.offsetY - dragStart[1];
  if (Math.hypot(dx, dy) > 3) dragged = true;
  if (dragged) {
    view.pan(dx, dy);
    dragStart = [ev.offsetX, ev.offsetY];
    redraw();
  }
});
canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  view.zoomAt(ev.offsetX, ev.offsetY, ev.deltaY < 0 ? 1.15 : 1 / 1.15);
  redraw();
});
window.addEventListener("mouseup", () => { dragStart = null; });

canvas.addEventListener("click", async (ev) => {
  if (dragged || !solution || !dataset) return;
  const hit = pickPoint(view, points, ev.offsetX, ev.offsetY);
  if (!hit) return; // empty space: no request
  if (!solution.ids.includes(hit.id)) {
    return say(`object ${hit.id} is not selected; local zoom needs a selected object`);
  }
  const rPrime = Number($<HTMLInputElement>("local-r").value);
  if (!(rPrime > 0) || rPrime === solution.radius) {
    return say("pick a positive local radius different from the current one", true);
  }
  try {
    const z = await client.zoom(solution.id, rPrime, undefined, hit.id);
    focusCircle = { x: hit.x, y: hit.y, r: solution.radius };
    applySolution(z, z.diff);
    // settle the viewport on the focus neighborhood
    const [sx, sy] = view.toScreen(hit.x, hit.y);
    view.zoomAt(sx, sy, 1.4);
    redraw();
    say(`local zoom around ${hit.id}: +${z.diff.added.length} / -${z.diff.removed.length}`);
  } catch (err) {
    say(err instanceof ApiError ? err.message : String(err), true);
  }
});

say("generate a dataset to begin");
