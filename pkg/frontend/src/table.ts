/** Table fallback for datasets without a 2D embedding (categorical data):
 * selected rows first, each followed by its similar rows, indented.
 */

export interface TableRow {
  id: number;
  labels: string[];
  selected: boolean;
  indent: boolean;
}

export function hamming(a: string[], b: string[]): number {
  let d = 0;
  for (let i = 0; i < a.length; i++) if (a[i] !== b[i]) d += 1;
  return d;
}

export function euclideanOfStrings(a: string[], b: string[]): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) {
    const d = Number(a[i]) - Number(b[i]);
    s += d * d;
  }
  return Math.sqrt(s);
}

export function buildTableModel(
  ids: number[],
  labels: string[][],
  solutionIds: number[],
  radius: number,
  distance: (a: string[], b: string[]) => number = hamming,
): TableRow[] {
  const byId = new Map<number, string[]>();
  ids.forEach((id, i) => byId.set(id, labels[i] ?? []));
  const selected = new Set(solutionIds);
  const rows: TableRow[] = [];
  const shown = new Set<number>();
  for (const sid of solutionIds) {
    const sl = byId.get(sid);
    if (!sl) continue;
    rows.push({ id: sid, labels: sl, selected: true, indent: false });
    shown.add(sid);
    for (const id of ids) {
      if (selected.has(id) || shown.has(id)) continue;
      const l = byId.get(id);
      if (l && distance(sl, l) <= radius) {
        rows.push({ id, labels: l, selected: false, indent: true });
        shown.add(id);
      }
    }
  }
  for (const id of ids) {
    if (!shown.has(id)) {
      const l = byId.get(id);
      if (l) rows.push({ id, labels: l, selected: false, indent: false });
    }
  }
  return rows;
}
