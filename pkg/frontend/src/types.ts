/** Wire types of the diversification service. */

export interface DatasetSummary {
  id: string;
  n: number;
  d: number;
  kind: "numeric" | "categorical";
  metric: string;
  extent: [number, number][];
}

export interface DatasetPoints extends DatasetSummary {
  ids: number[];
  coords?: number[][];
  labels?: string[][];
}

export interface VerifyFlags {
  coverage: boolean;
  independence: boolean;
}

export interface Solution {
  id: string;
  dataset_id: string;
  radius: number;
  algorithm: string;
  ids: number[];
  size: number;
  access_cost: number;
  verify?: VerifyFlags;
}

export interface DiffPayload {
  kept: number[];
  added: number[];
  removed: number[];
}

export interface ZoomResponse extends Solution {
  base_id: string;
  diff: DiffPayload;
  metadata: Record<string, unknown>;
}

export interface GenerateSpec {
  type: "uniform" | "clustered";
  n: number;
  d: number;
  n_clusters?: number;
  seed: number;
}

export type ZoomVariant = "plain" | "greedy" | "greedy_a" | "greedy_b" | "greedy_c";
