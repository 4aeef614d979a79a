/** Typed client for the segmentation service endpoints. */

export interface MetricsPayload {
  accuracy: number;
  jaccard: number;
  dice: number;
  precision: number;
  recall: number;
  f_measure: number;
  method: string;
  case_id: string;
  elapsed: number;
}

export interface TraceEntry {
  iteration: number;
  labels: string; // base64 PGM
}

export interface SegmentResponse {
  labels: string;
  iterations_run: number;
  converged: boolean;
  elapsed_s: number;
  metrics?: MetricsPayload;
  trace?: TraceEntry[];
}

export interface SegmentRequestBody {
  image: string;
  seeds?: string;
  method: string;
  max_iters?: number;
  trace?: boolean;
  trace_stride?: number;
  gt?: string;
}

export interface PhantomPayload {
  id: string;
  rng_seed: number;
  rows: number;
  cols: number;
  image: string;
  gt: string;
  seeds?: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function parseError(res: Response): Promise<never> {
  let code = "http_error";
  let detail = res.statusText;
  try {
    const body = (await res.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(res.status, code, detail);
}

export async function segment(body: SegmentRequestBody, base = ""): Promise<SegmentResponse> {
  const res = await fetch(`${base}/api/segment`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!res.ok) await parseError(res);
  return (await res.json()) as SegmentResponse;
}

export async function fetchPhantom(
  params: { rng_seed?: number; rows?: number; cols?: number } = {},
  base = "",
): Promise<PhantomPayload> {
  const q = new URLSearchParams();
  for (const [k, v] of Object.entries(params)) q.set(k, String(v));
  const res = await fetch(`${base}/api/phantom?${q.toString()}`);
  if (!res.ok) await parseError(res);
  return (await res.json()) as PhantomPayload;
}

export async function health(base = ""): Promise<{ status: string; version: string }> {
  const res = await fetch(`${base}/api/health`);
  if (!res.ok) await parseError(res);
  return (await res.json()) as { status: string; version: string };
}
