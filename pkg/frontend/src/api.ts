/** Thin client over the annotation service endpoints. */

import type { IaaReport, SchemaDoc, TaskResponse } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiErrorBody {
  error: string;
}

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class ApiClient {
  private annotator: string;
  private token: string;
  private doFetch: FetchLike;

  constructor(annotator: string, token: string, doFetch: FetchLike = fetch.bind(globalThis)) {
    this.annotator = annotator;
    this.token = token;
    this.doFetch = doFetch;
  }

  private headers(): Record<string, string> {
    const h: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) h["X-Annotator-Token"] = this.token;
    return h;
  }

  private async call<T>(url: string, init?: RequestInit): Promise<T> {
    const resp = await this.doFetch(url, { ...init, headers: this.headers() });
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, (body as ApiErrorBody).error ?? resp.statusText);
    }
    return body as T;
  }

  getSchema(): Promise<SchemaDoc> {
    return this.call<SchemaDoc>("/api/schema");
  }

  getNextTask(): Promise<TaskResponse> {
    return this.call<TaskResponse>(`/api/tasks/next?annotator=${encodeURIComponent(this.annotator)}`);
  }

  /** Body is the canonical pre-serialized payload, sent byte for byte. */
  postAnnotations(body: string): Promise<{ ok: boolean; completed: number }> {
    return this.call("/api/annotations", { method: "POST", body });
  }

  getIaa(group: string): Promise<IaaReport> {
    return this.call<IaaReport>(`/api/iaa?group=${encodeURIComponent(group)}`);
  }
}
