import { describe, expect, it } from "vitest";

import { renderStates } from "../src/diff.js";
import { STATE_COLORS, Viewport, drawScatter, pickPoint,
         type Ctx2D, type ScatterPoint } from "../src/scatter.js";

interface ArcCall {
  x: number;
  y: number;
  r: number;
  fillStyle: string;
  mode: "fill" | "stroke";
}

/** Records draw calls so assertions can run without a DOM or real canvas. */
class RecordingCtx implements Ctx2D {
  fillStyle = "";
  strokeStyle = "";
  lineWidth = 1;
  globalAlpha = 1;
  cleared = 0;
  arcs: ArcCall[] = [];
  private pendingArc: ArcCall | null = null;

  clearRect(): void { this.cleared += 1; }
  beginPath(): void { this.pendingArc = null; }
  arc(x: number, y: number, r: number): void {
    this.pendingArc = { x, y, r, fillStyle: this.fillStyle, mode: "fill" };
  }
  moveTo(): void {}
  lineTo(): void {}
  fill(): void {
    if (this.pendingArc) this.arcs.push({ ...this.pendingArc, mode: "fill" });
  }
  stroke(): void {
    if (this.pendingArc) {
      this.arcs.push({ ...this.pendingArc, fillStyle: this.strokeStyle, mode: "stroke" });
    }
  }
}

const POINTS: ScatterPoint[] = [
  { id: 1, x: 0.2, y: 0.2 },
  { id: 2, x: 0.5, y: 0.5 },
  { id: 3, x: 0.8, y: 0.8 },
];

describe("drawScatter", () => {
  it("draws every point and no circles for an empty solution", () => {
    const ctx = new RecordingCtx();
    const view = new Viewport(200, 200);
    drawScatter(ctx, view, { points: POINTS, selected: new Set(), radius: null, states: null });
    expect(ctx.cleared).toBe(1);
    expect(ctx.arcs.filter((a) => a.mode === "fill").length).toBe(3);
    expect(ctx.arcs.filter((a) => a.mode === "stroke").length).toBe(0);
  });

  it("emphasizes a singleton solution with one radius circle", () => {
    const ctx = new RecordingCtx();
    const view = new Viewport(200, 200);
    drawScatter(ctx, view, {
      points: POINTS, selected: new Set([2]), radius: 0.1, states: null,
    });
    const strokes = ctx.arcs.filter((a) => a.mode === "stroke");
    expect(strokes.length).toBe(1);
    expect(strokes[0]!.r).toBeCloseTo(view.dataLength(0.1), 10);
    const [cx, cy] = view.toScreen(0.5, 0.5);
    expect(strokes[0]!.x).toBeCloseTo(cx, 10);
    expect(strokes[0]!.y).toBeCloseTo(cy, 10);
    const big = ctx.arcs.filter((a) => a.mode === "fill" && a.r > 3);
    expect(big.length).toBe(1); // only the selected point is bold
  });

  it("colors diff states from the payload: added green, removed red, kept dark", () => {
    const ctx = new RecordingCtx();
    const view = new Viewport(200, 200);
    const states = renderStates([1, 2, 3], [1, 2], { kept: [1], added: [2], removed: [3] });
    drawScatter(ctx, view, { points: POINTS, selected: new Set([1, 2]), radius: 0.05, states });
    const fillOf = (id: number) => {
      const p = POINTS.find((q) => q.id === id)!;
      const [sx, sy] = view.toScreen(p.x, p.y);
      return ctx.arcs.find((a) => a.mode === "fill" &&
        Math.abs(a.x - sx) < 1e-9 && Math.abs(a.y - sy) < 1e-9)!.fillStyle;
    };
    expect(fillOf(1)).toBe(STATE_COLORS.kept);
    expect(fillOf(2)).toBe(STATE_COLORS.added);
    expect(fillOf(3)).toBe(STATE_COLORS.removed);
  });

  it("keeps the viewport transform independent of the solution radius", () => {
    const ctx = new RecordingCtx();
    const view = new Viewport(200, 200);
    const before = view.toScreen(0.5, 0.5);
    view.zoomAt(100, 100, 2);
    view.pan(10, -5);
    drawScatter(ctx, view, { points: POINTS, selected: new Set([2]), radius: 0.1, states: null });
    const strokes = ctx.arcs.filter((a) => a.mode === "stroke");
    expect(strokes[0]!.r).toBeCloseTo(view.dataLength(0.1), 10);
    expect(view.dataLength(0.1)).toBeGreaterThan(new Viewport(200, 200).dataLength(0.1));
    const after = view.toScreen(0.5, 0.5);
    expect(after).not.toEqual(before);
    // zoom/pan of the picture never changes the data-space radius value
    expect(view.toData(...after).map((v) => Math.round(v * 1e9) / 1e9)).toEqual([0.5, 0.5]);
  });
});

describe("pickPoint", () => {
  it("finds the nearest point within tolerance", () => {
    const view = new Viewport(200, 200);
    const [sx, sy] = view.toScreen(0.5, 0.5);
    expect(pickPoint(view, POINTS, sx + 3, sy - 2)?.id).toBe(2);
  });

  it("returns null for empty space", () => {
    const view = new Viewport(200, 200);
    const [sx, sy] = view.toScreen(0.35, 0.65);
    expect(pickPoint(view, POINTS, sx, sy)).toBeNull();
  });
});
