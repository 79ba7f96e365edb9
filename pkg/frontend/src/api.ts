/** Thin client for the layout service. The base URL and fetch function
 * are injectable so tests can point it anywhere. */

import type { DatasetDoc, LayoutDoc, LayoutRequest, Mode, ReportDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface ReportPair {
  force_directed: ReportDoc;
  force_layered: ReportDoc;
  table: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, "network", `cannot reach the layout service: ${String(err)}`);
    }
    if (!response.ok) {
      let code = "error";
      let message = `request failed with status ${response.status}`;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        if (body.code) code = body.code;
        if (body.message) message = body.message;
      } catch {
        // keep the generic message
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/api/health");
  }

  dataset(): Promise<DatasetDoc> {
    return this.request("/api/dataset");
  }

  layout(req: LayoutRequest): Promise<LayoutDoc> {
    return this.request("/api/layout", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  snapshot(year: number): Promise<DatasetDoc> {
    return this.request(`/api/query/snapshot?year=${encodeURIComponent(year)}`);
  }

  report(seed: number): Promise<ReportPair> {
    return this.request(`/api/report?seed=${encodeURIComponent(seed)}`);
  }

  mostConnected(): Promise<{ most_connected: string[] }> {
    return this.request("/api/query/most-connected");
  }

  common(a: string, b: string): Promise<{ common: string[] }> {
    return this.request(
      `/api/query/common?a=${encodeURIComponent(a)}&b=${encodeURIComponent(b)}`,
    );
  }
}

export function modeEntry(layout: LayoutDoc, mode: Mode) {
  const entry = layout.modes[mode];
  if (!entry) throw new ApiError(0, "missing_mode", `layout document lacks mode ${mode}`);
  return entry;
}
