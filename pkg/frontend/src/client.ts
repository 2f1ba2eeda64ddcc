/** API client: builds requests strictly from the contract and records every exchange. */

import { ContractDocument, matchEndpoint } from "./contract.js";
import { Exchange, HttpRequest, HttpResponse } from "./validate.js";
import { Responder } from "./mock.js";

export type Transport = (request: HttpRequest) => Promise<HttpResponse>;

export class ContractViolationError extends Error {}

export interface UiConfig {
  api_base_url: string;
  tile_url: string;
  poll_interval_s: number;
}

/** Transport over a synchronous mock responder. */
export function mockTransport(responder: Responder): Transport {
  return async (request) => responder(request);
}

/** Transport over fetch against a live service. */
export function httpTransport(config: UiConfig, token?: string): Transport {
  return async (request) => {
    const url = new URL(request.path, config.api_base_url);
    for (const [k, v] of Object.entries(request.query)) url.searchParams.set(k, v);
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (token) headers.authorization = `Bearer ${token}`;
    const response = await fetch(url.toString(), {
      method: request.method,
      headers,
      body: request.body === null ? undefined : JSON.stringify(request.body),
    });
    return { status: response.status, body: await response.json() };
  };
}

export class ApiClient {
  readonly recorded: Exchange[] = [];

  constructor(
    private readonly contract: ContractDocument,
    private readonly transport: Transport,
  ) {}

  private async call(request: HttpRequest): Promise<HttpResponse> {
    if (matchEndpoint(this.contract, request.method, request.path) === null) {
      throw new ContractViolationError(
        `refusing to send undeclared request ${request.method} ${request.path}`,
      );
    }
    const response = await this.transport(request);
    this.recorded.push({ request, response });
    return response;
  }

  geolocations(query: Record<string, string>): Promise<HttpResponse> {
    return this.call({ method: "GET", path: "/api/v1/geolocations", query, body: null });
  }

  object(id: string): Promise<HttpResponse> {
    return this.call({
      method: "GET", path: `/api/v1/objects/${id}`, query: {}, body: null,
    });
  }

  trajectory(id: string, query: Record<string, string> = {}): Promise<HttpResponse> {
    return this.call({
      method: "GET", path: `/api/v1/objects/${id}/trajectory`, query, body: null,
    });
  }

  anomalies(query: Record<string, string>): Promise<HttpResponse> {
    return this.call({ method: "GET", path: "/api/v1/anomalies", query, body: null });
  }

  explanation(anomalyId: string): Promise<HttpResponse> {
    return this.call({
      method: "GET",
      path: `/api/v1/anomalies/${anomalyId}/explanation`,
      query: {},
      body: null,
    });
  }

  detect(body: {
    object_id: string; from_ts: number; to_ts: number; model?: string;
  }): Promise<HttpResponse> {
    return this.call({ method: "POST", path: "/api/v1/detect", query: {}, body });
  }

  submitLabel(body: Record<string, unknown>): Promise<HttpResponse> {
    return this.call({ method: "POST", path: "/api/v1/labels", query: {}, body });
  }

  health(): Promise<HttpResponse> {
    return this.call({ method: "GET", path: "/api/v1/health", query: {}, body: null });
  }
}
