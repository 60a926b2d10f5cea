/** Thin typed client over the camforge HTTP service. */

import type {
  ApiErrorBody,
  ParamValue,
  PreviewResponse,
  UploadResponse,
  WorkflowDescriptor,
  WorkflowFilters,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.detail ?? body.error);
  }
}

/** Query string for GET /workflows; pure so the card list is a function of it. */
export function buildWorkflowQuery(filters: WorkflowFilters): string {
  const params = new URLSearchParams();
  if (filters.keyword) params.set("keyword", filters.keyword);
  if (filters.machines && filters.machines.length > 0) {
    params.set("machines", filters.machines.join(","));
  }
  for (const [name, value] of Object.entries(filters.product ?? {})) {
    params.set(name, String(value));
  }
  for (const [name, value] of Object.entries(filters.structure ?? {})) {
    params.set(name, String(value));
  }
  const query = params.toString();
  return query ? `?${query}` : "";
}

async function errorFrom(response: Response): Promise<ApiError> {
  let body: ApiErrorBody;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = { error: `HTTP ${response.status}` };
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async uploadModel(data: Uint8Array): Promise<UploadResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/models`, {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: data as unknown as BodyInit,
    });
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as UploadResponse;
  }

  async listWorkflows(filters: WorkflowFilters = {}): Promise<WorkflowDescriptor[]> {
    const response = await this.fetchFn(
      `${this.baseUrl}/workflows${buildWorkflowQuery(filters)}`,
    );
    if (!response.ok) throw await errorFrom(response);
    const body = (await response.json()) as { workflows: WorkflowDescriptor[] };
    return body.workflows;
  }

  async createPreview(
    modelId: string,
    workflowId: string,
    params: Record<string, ParamValue>,
  ): Promise<PreviewResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/previews`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model_id: modelId, workflow_id: workflowId, params }),
    });
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as PreviewResponse;
  }

  async createExport(
    modelId: string,
    workflowId: string,
    params: Record<string, ParamValue>,
  ): Promise<{ bytes: Uint8Array; filename: string }> {
    const response = await this.fetchFn(`${this.baseUrl}/exports`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model_id: modelId, workflow_id: workflowId, params }),
    });
    if (!response.ok) throw await errorFrom(response);
    const disposition = response.headers.get("content-disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    const filename = match ? match[1] : `${modelId}-${workflowId}.zip`;
    return { bytes: new Uint8Array(await response.arrayBuffer()), filename };
  }
}
