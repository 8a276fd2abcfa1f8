/** Thin typed client for the diversification service. */

import type {
  DatasetPoints, DatasetSummary, GenerateSpec, Solution, ZoomResponse,
  ZoomVariant,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`service responded ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

function post<T>(url: string, payload: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export class Client {
  constructor(readonly baseUrl: string) {}

  generateDataset(spec: GenerateSpec): Promise<DatasetSummary> {
    return post(`${this.baseUrl}/datasets`, { generate: spec });
  }

  uploadCsv(csv: string, kind: string, normalize = true): Promise<DatasetSummary> {
    return post(`${this.baseUrl}/datasets`, { csv, kind, normalize });
  }

  datasetPoints(id: string): Promise<DatasetPoints> {
    return request(`${this.baseUrl}/datasets/${id}?include_points=true`);
  }

  solve(datasetId: string, r: number, algorithm: string): Promise<Solution> {
    return post(`${this.baseUrl}/datasets/${datasetId}/disc`, { r, algorithm });
  }

  zoom(solutionId: string, rPrime: number, variant?: ZoomVariant,
       focus?: number): Promise<ZoomResponse> {
    const payload: Record<string, unknown> = { r_prime: rPrime };
    if (variant !== undefined) payload.variant = variant;
    if (focus !== undefined) payload.focus = focus;
    return post(`${this.baseUrl}/solutions/${solutionId}/zoom`, payload);
  }

  solution(id: string, reference?: string): Promise<Solution & { quality: Record<string, unknown> }> {
    const suffix = reference ? `?reference=${reference}` : "";
    return request(`${this.baseUrl}/solutions/${id}${suffix}`);
  }
}
