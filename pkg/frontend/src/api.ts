/** Thin client for the motiflab HTTP facade.  All compute happens server
 * side; this module only shapes requests and decodes responses. */

import type {
  Diagnostics,
  Placement,
  PresetEntry,
  RenderRequest,
  RenderResult,
  RenderStats,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class StudioClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async post(
    path: string,
    body: unknown,
    signal?: AbortSignal,
  ): Promise<Response> {
    const r = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!r.ok) {
      let detail = r.statusText;
      try {
        const doc = await r.json();
        if (typeof doc?.detail === "string") detail = doc.detail;
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(r.status, detail);
    }
    return r;
  }

  async validate(equation: string): Promise<Diagnostics> {
    const r = await this.post("/api/validate", { equation });
    return (await r.json()) as Diagnostics;
  }

  async presets(): Promise<PresetEntry[]> {
    const r = await this.fetchImpl(this.baseUrl + "/api/presets");
    if (!r.ok) throw new ApiError(r.status, r.statusText);
    return (await r.json()) as PresetEntry[];
  }

  async render(
    req: RenderRequest,
    signal?: AbortSignal,
  ): Promise<RenderResult> {
    const r = await this.post("/api/render", req, signal);
    const statsHeader = r.headers.get("x-render-stats");
    const placementsHeader = r.headers.get("x-layout-placements");
    let stats: RenderStats | null = null;
    if (statsHeader) {
      const doc = JSON.parse(statsHeader);
      stats = (doc.render_stats ?? doc) as RenderStats;
    }
    return {
      bytes: new Uint8Array(await r.arrayBuffer()),
      contentType: r.headers.get("content-type") ?? "",
      stats,
      placements: placementsHeader
        ? (JSON.parse(placementsHeader) as Placement[])
        : null,
    };
  }

  async curveSvg(spec: {
    a: number;
    b: number;
    samples?: number;
  }): Promise<string> {
    const r = await this.post("/api/curve", spec);
    return r.text();
  }
}
