/** Typed client for the analysis service. Every number the UI displays comes
 * through this module; nothing is computed client-side. */

import type { AnalysisKind, ParamSet } from "./params.js";

export interface VanishingPointJson {
  point: [number, number] | null;
  direction: [number, number];
  homogeneous: number[];
  rms_residual: number;
  support: number;
}

export interface HeightJson {
  target_id: string;
  height_cm: number;
  interval_cm: [number, number];
  method: string;
}

export interface TiltJson {
  lr_ratio: number;
  tb_ratio: number;
  verdict: string;
  threshold: number;
}

export interface DistortionJson {
  max_sagitta_px: number;
  normalized_sagitta: number;
  sign: string;
}

export interface MetrologyJson {
  image_hash: string;
  seed: number;
  vanishing_points: Record<string, VanishingPointJson>;
  horizon: number[] | null;
  tilt: TiltJson | null;
  distortion: DistortionJson | null;
  heights: HeightJson[];
  notes: string[];
}

export interface MetaJson {
  file: { size: number; hash: string };
  sof: {
    image_width: number | null;
    image_height: number | null;
    image_size: string | null;
    megapixels: number | null;
    encoding_process?: string | null;
    subsampling?: string | null;
  };
  [key: string]: unknown;
}

export interface DemoJson {
  image_id: string;
  annotations: string;
  reference_height_cm: number;
  target_truth_cm: Record<string, number>;
}

export class ApiError extends Error {
  status: number;
  field?: string;
  problems?: string[];

  constructor(status: number, message: string, field?: string, problems?: string[]) {
    super(message);
    this.status = status;
    this.field = field;
    this.problems = problems;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let message = `HTTP ${response.status}`;
  let field: string | undefined;
  let problems: string[] | undefined;
  try {
    const body = await response.json();
    if (typeof body.error === "string") message = body.error;
    if (typeof body.field === "string") field = body.field;
    if (Array.isArray(body.problems)) problems = body.problems;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, message, field, problems);
}

/** Stable query string: parameters sorted by name so equal parameter sets hit
 * the same cache entry. */
export function analysisQuery(params: ParamSet): string {
  const entries = Object.entries(params)
    .map(([k, v]) => [k, String(v)] as const)
    .sort((a, b) => (a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0));
  return entries.map(([k, v]) => `${encodeURIComponent(k)}=${encodeURIComponent(v)}`).join("&");
}

export class ApiClient {
  requestCount = 0;

  constructor(
    private fetchFn: FetchLike = (...args) => fetch(...args),
    private base = "",
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    this.requestCount += 1;
    const response = await this.fetchFn(this.base + path, init);
    await raiseForStatus(response);
    return response;
  }

  async uploadImage(file: Blob, name = "upload"): Promise<string> {
    const form = new FormData();
    form.append("file", file, name);
    const response = await this.request("/api/images", { method: "POST", body: form });
    const body = await response.json();
    return body.image_id as string;
  }

  async getMeta(imageId: string): Promise<MetaJson> {
    const response = await this.request(`/api/images/${imageId}/meta`);
    return (await response.json()) as MetaJson;
  }

  analysisUrl(imageId: string, kind: AnalysisKind, params: ParamSet): string {
    const query = analysisQuery(params);
    return `${this.base}/api/images/${imageId}/analysis/${kind}${query ? "?" + query : ""}`;
  }

  /** Fetch an analysis map as a blob URL (also verifies parameters server-side). */
  async fetchAnalysis(imageId: string, kind: AnalysisKind, params: ParamSet): Promise<Blob> {
    const query = analysisQuery(params);
    const response = await this.request(
      `/api/images/${imageId}/analysis/${kind}${query ? "?" + query : ""}`,
    );
    return await response.blob();
  }

  async putAnnotations(imageId: string, name: string, json: string): Promise<void> {
    await this.request(`/api/images/${imageId}/annotations/${name}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: json,
    });
  }

  async getAnnotations(imageId: string, name: string): Promise<unknown> {
    const response = await this.request(`/api/images/${imageId}/annotations/${name}`);
    return await response.json();
  }

  async getMetrology(imageId: string, name: string, seed = 0): Promise<MetrologyJson> {
    const response = await this.request(
      `/api/images/${imageId}/metrology?annotations=${encodeURIComponent(name)}&seed=${seed}`,
    );
    return (await response.json()) as MetrologyJson;
  }

  async getPixels(imageId: string, x: number, y: number, r: number): Promise<unknown> {
    const response = await this.request(`/api/images/${imageId}/pixels?x=${x}&y=${y}&r=${r}`);
    return await response.json();
  }

  async getDemo(): Promise<DemoJson> {
    const response = await this.request("/api/demo");
    return (await response.json()) as DemoJson;
  }
}
