// Thin typed client over the policy service REST API.

import type {
  ExplainResponse,
  MatrixResponse,
  PolicyResponse,
  PrecedentPayload,
  RejectionDetail,
  ResolutionResponse,
  SubmitResponse,
  WhatifResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`service responded ${status}`);
  }
}

export type SubmitResult =
  | { kind: "admitted"; body: SubmitResponse }
  | { kind: "pending"; body: SubmitResponse }
  | { kind: "rejected"; detail: RejectionDetail };

export class PolicyClient {
  constructor(private readonly baseUrl: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body.detail ?? body);
    }
    return body as T;
  }

  async matrix(mode?: string): Promise<MatrixResponse> {
    const query = mode ? `?mode=${encodeURIComponent(mode)}` : "";
    return this.getJson<MatrixResponse>(`/matrix${query}`);
  }

  async explain(subject: string, object: string, mode?: string): Promise<ExplainResponse> {
    const params = new URLSearchParams({ subject, object });
    if (mode) params.set("mode", mode);
    return this.getJson<ExplainResponse>(`/explain?${params.toString()}`);
  }

  async policy(): Promise<PolicyResponse> {
    return this.getJson<PolicyResponse>("/policy");
  }

  async submitPrecedent(precedent: PrecedentPayload): Promise<SubmitResult> {
    const response = await fetch(`${this.baseUrl}/precedents`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(precedent),
    });
    const body = await response.json();
    if (response.status === 200) return { kind: "admitted", body: body as SubmitResponse };
    if (response.status === 202) return { kind: "pending", body: body as SubmitResponse };
    if (response.status === 409) return { kind: "rejected", detail: body.detail as RejectionDetail };
    throw new ApiError(response.status, body.detail ?? body);
  }

  async resolveCollision(collisionId: number, choice: "keep-old" | "keep-new"):
      Promise<ResolutionResponse> {
    const response = await fetch(`${this.baseUrl}/collisions/${collisionId}/resolution`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ choice }),
    });
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body.detail ?? body);
    return body as ResolutionResponse;
  }

  async whatif(precedents: PrecedentPayload[], mode?: string): Promise<WhatifResponse> {
    const response = await fetch(`${this.baseUrl}/whatif`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ precedents, mode: mode ?? null }),
    });
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body.detail ?? body);
    return body as WhatifResponse;
  }
}
