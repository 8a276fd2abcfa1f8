/** Canvas scatter renderer: all points, selected objects emphasized with
 * their radius circles, diff states colored. The viewport transform (pan +
 * zoom of the picture) is independent of the diversification radius.
 *
 * Rendering goes through a minimal context interface so tests can record
 * draw calls without a DOM.
 */

import type { PointState } from "./diff.js";

export interface Ctx2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fill(): void;
  stroke(): void;
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
}

export interface ScatterPoint {
  id: number;
  x: number;
  y: number;
}

export const STATE_COLORS: Record<PointState, string> = {
  plain: "#9aa5b1",
  selected: "#111111",
  kept: "#111111",
  added: "#0a8a2f",
  removed: "#c92a2a",
};

const EMPHASIZED: ReadonlySet<PointState> = new Set(["selected", "kept", "added"]);

export class Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;

  constructor(readonly width: number, readonly height: number, scale = 1) {
    // data space is the unit square; fit it with a small margin
    const fit = Math.min(width, height) * 0.9;
    this.scale = fit * scale;
    this.offsetX = (width - fit * scale) / 2;
    this.offsetY = (height - fit * scale) / 2;
  }

  toScreen(x: number, y: number): [number, number] {
    return [this.offsetX + x * this.scale, this.offsetY + (1 - y) * this.scale];
  }

  toData(sx: number, sy: number): [number, number] {
    return [(sx - this.offsetX) / this.scale, 1 - (sy - this.offsetY) / this.scale];
  }

  dataLength(r: number): number {
    return r * this.scale;
  }

  pan(dx: number, dy: number): void {
    this.offsetX += dx;
    this.offsetY += dy;
  }

  zoomAt(sx: number, sy: number, factor: number): void {
    const [dx, dy] = this.toData(sx, sy);
    this.scale *= factor;
    const [nx, ny] = this.toScreen(dx, dy);
    this.offsetX += sx - nx;
    this.offsetY += sy - ny;
  }
}

export interface DrawOptions {
  points: ScatterPoint[];
  selected: ReadonlySet<number>;
  radius: number | null;
  states: Map<number, PointState> | null;
  focus?: { x: number; y: number; r: number } | null;
}

export function drawScatter(ctx: Ctx2D, view: Viewport, opts: DrawOptions): void {
  ctx.clearRect(0, 0, view.width, view.height);
  const { points, selected, radius, states } = opts;

  // radius circles behind everything else
  if (radius !== null) {
    ctx.strokeStyle = "#5f8fd633";
    ctx.lineWidth = 1;
    for (const p of points) {
      if (!selected.has(p.id)) continue;
      const state = states?.get(p.id) ?? "selected";
      if (state === "removed") continue;
      const [sx, sy] = view.toScreen(p.x, p.y);
      ctx.beginPath();
      ctx.arc(sx, sy, view.dataLength(radius), 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  if (opts.focus) {
    const [sx, sy] = view.toScreen(opts.focus.x, opts.focus.y);
    ctx.strokeStyle = "#e8a33d";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(sx, sy, view.dataLength(opts.focus.r), 0, 2 * Math.PI);
    ctx.stroke();
  }

  for (const p of points) {
    const state: PointState = states?.get(p.id)
      ?? (selected.has(p.id) ? "selected" : "plain");
    const [sx, sy] = view.toScreen(p.x, p.y);
    const emphasized = EMPHASIZED.has(state);
    ctx.fillStyle = STATE_COLORS[state];
    ctx.globalAlpha = state === "plain" ? 0.55 : 1.0;
    ctx.beginPath();
    ctx.arc(sx, sy, emphasized ? 4.5 : 2, 0, 2 * Math.PI);
    ctx.fill();
    if (state === "removed") {
      // hollow ring plus a slash so a removed member stays legible
      ctx.strokeStyle = STATE_COLORS.removed;
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      ctx.arc(sx, sy, 5.5, 0, 2 * Math.PI);
      ctx.stroke();
      ctx.beginPath();
      ctx.moveTo(sx - 5.5, sy + 5.5);
      ctx.lineTo(sx + 5.5, sy - 5.5);
      ctx.stroke();
    }
  }
  ctx.globalAlpha = 1.0;
}

/** Nearest point within a screen-space tolerance, or null. */
export function pickPoint(
  view: Viewport, points: ScatterPoint[], sx: number, sy: number,
  toleranceHint = 8,
): ScatterPoint | null {
  let best: ScatterPoint | null = null;
  let bestDist = toleranceHint;
  for (const p of points) {
    const [px, py] = view.toScreen(p.x, p.y);
    const d = Math.hypot(px - sx, py - sy);
    if (d <= bestDist) {
      best = p;
      bestDist = d;
    }
  }
  return best;
}
