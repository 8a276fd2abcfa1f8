/** Pure mapping from the service's diff payload to per-point render states.
 *
 * The UI never recomputes diversification: whatever the service says was
 * kept, added or removed is rendered verbatim.
 */

import type { DiffPayload } from "./types.js";

export type PointState = "plain" | "selected" | "kept" | "added" | "removed";

export function renderStates(
  allIds: number[],
  solutionIds: number[],
  diff: DiffPayload | null,
): Map<number, PointState> {
  const states = new Map<number, PointState>();
  for (const id of allIds) states.set(id, "plain");
  if (diff === null) {
    for (const id of solutionIds) states.set(id, "selected");
    return states;
  }
  for (const id of diff.kept) states.set(id, "kept");
  for (const id of diff.added) states.set(id, "added");
  for (const id of diff.removed) states.set(id, "removed");
  return states;
}

/** Sanity of a diff against the old/new id lists: partition both ways. */
export function diffIsConsistent(
  diff: DiffPayload, oldIds: number[], newIds: number[],
): boolean {
  const sorted = (xs: number[]) => [...xs].sort((a, b) => a - b).join(",");
  return (
    sorted([...diff.kept, ...diff.added]) === sorted(newIds) &&
    sorted([...diff.kept, ...diff.removed]) === sorted(oldIds)
  );
}

/** True when every changed object sits inside the focus circle (local zoom). */
export function diffWithinFocus(
  diff: DiffPayload,
  position: (id: number) => [number, number] | undefined,
  focus: [number, number],
  radius: number,
  distance: (a: [number, number], b: [number, number]) => number = euclidean,
): boolean {
  for (const id of [...diff.added, ...diff.removed]) {
    const p = position(id);
    if (!p) return false;
    if (distance(p, focus) > radius + 1e-9) return false;
  }
  return true;
}

export function euclidean(a: [number, number], b: [number, number]): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}
