/** Mock responders built from the contract document.
 *
 * `mockResponder` answers from canned examples and rejects any request that
 * violates the contract, so the UI can be built with no service running.
 * `worldResponder` layers a tiny in-memory world on top for scripted sessions.
 */

import { ContractDocument, ContractDefinitionError, matchEndpoint } from "./contract.js";
import {
  HttpRequest,
  HttpResponse,
  requestViolations,
  validateHttpExchange,
} from "./validate.js";

export type Responder = (request: HttpRequest) => HttpResponse;

export function mockResponder(
  contract: ContractDocument,
  canned: Map<string, HttpResponse>, // key: "METHOD /path/template"
): Responder {
  const endpoints = new Set(
    contract.body.endpoints.map((e) => `${e.method} ${e.path}`),
  );
  for (const [key, response] of canned) {
    if (!endpoints.has(key)) {
      throw new ContractDefinitionError(`canned example for undeclared endpoint ${key}`);
    }
    const [method, path] = [key.split(" ")[0], key.split(" ").slice(1).join(" ")];
    const probe: HttpRequest = { method, path, query: {}, body: null };
    const bad = validateHttpExchange(contract, probe, response).filter(
      (v) => v.location.endsWith("#status") || v.location.includes("#response"),
    );
    if (bad.length > 0) {
      throw new ContractDefinitionError(
        `canned example for ${key} violates contract: ` +
          bad.map((v) => `${v.kind} ${v.location} ${v.message}`).join("; "),
      );
    }
  }

  return (request: HttpRequest): HttpResponse => {
    const violations = requestViolations(contract, request);
    if (violations.length > 0) {
      return {
        status: 400,
        body: {
          error: {
            kind: "contract_violation",
            message: "request does not conform to the code contract",
            violations,
          },
        },
      };
    }
    const endpoint = matchEndpoint(contract, request.method, request.path)!;
    const response = canned.get(`${endpoint.method} ${endpoint.path}`);
    if (response === undefined) {
      return {
        status: 400,
        body: {
          error: {
            kind: "no_canned_example",
            message: `no canned example for ${endpoint.method} ${endpoint.path}`,
          },
        },
      };
    }
    return response;
  };
}

// ---------------------------------------------------------------------------
// A small in-memory world for scripted sessions
// ---------------------------------------------------------------------------

export interface Fix {
  object_id: string;
  lat: number;
  lon: number;
  timestamp: number;
  source: string;
  object_type: string;
  sog?: number;
  cog?: number;
}

export interface ExplanationStep {
  rule_or_feature: string;
  observed: number;
  threshold_or_baseline: number;
  contribution: number;
  fired: boolean;
}

export interface AnomalyRecord {
  anomaly_id: string;
  object_id: string;
  kind: string;
  severity: number;
  start_ts: number;
  end_ts: number;
  lat: number;
  lon: number;
  model_id: string;
  explanation: { summary: string; steps: ExplanationStep[] };
}

export interface ObjectInfo {
  object_id: string;
  object_type: string;
  metadata: Record<string, string>;
}

export interface World {
  fixes: Fix[];
  objects: ObjectInfo[];
  anomalies: AnomalyRecord[];
}

function parseBbox(raw: string | undefined): number[] | null {
  if (!raw) return null;
  const parts = raw.split(",").map(Number);
  return parts.length === 4 && parts.every((p) => Number.isFinite(p)) ? parts : null;
}

function inBbox(lat: number, lon: number, bbox: number[] | null): boolean {
  if (!bbox) return true;
  const [minLat, minLon, maxLat, maxLon] = bbox;
  return lat >= minLat && lat <= maxLat && lon >= minLon && lon <= maxLon;
}

const ERROR_BODY = (kind: string, message: string) => ({ error: { kind, message } });

/** Dynamic responder over an in-memory world; every answer conforms to the contract. */
export function worldResponder(contract: ContractDocument, world: World): Responder {
  const labels: unknown[] = [];

  return (request: HttpRequest): HttpResponse => {
    const violations = requestViolations(contract, request);
    if (violations.length > 0) {
      return {
        status: 400,
        body: {
          error: {
            kind: "contract_violation",
            message: "request does not conform to the code contract",
            violations,
          },
        },
      };
    }
    const endpoint = matchEndpoint(contract, request.method, request.path)!;
    const key = `${endpoint.method} ${endpoint.path}`;
    const q = request.query;

    if (key === "GET /api/v1/health") {
      return {
        status: 200,
        body: { status: "ok", model_id: "rule-detector:1", contract },
      };
    }
    if (key === "GET /api/v1/geolocations") {
      const bbox = parseBbox(q.bbox);
      const from = q.from ? Number(q.from) : null;
      const to = q.to ? Number(q.to) : null;
      const sources = q.sources ? new Set(q.sources.split(",")) : null;
      const types = q.types ? new Set(q.types.split(",")) : null;
      const limit = q.limit ? Number(q.limit) : 10000;
      const fixes = world.fixes
        .filter((f) => inBbox(f.lat, f.lon, bbox))
        .filter((f) => (from === null || f.timestamp >= from))
        .filter((f) => (to === null || f.timestamp <= to))
        .filter((f) => (sources === null || sources.has(f.source)))
        .filter((f) => (types === null || types.has(f.object_type)))
        .slice(0, limit);
      return { status: 200, body: { fixes, count: fixes.length } };
    }
    if (key === "GET /api/v1/objects/{id}") {
      const id = request.path.split("/").pop()!;
      const info = world.objects.find((o) => o.object_id === id);
      if (!info) {
        return { status: 404, body: ERROR_BODY("not_found", `unknown object '${id}'`) };
      }
      return { status: 200, body: info };
    }
    if (key === "GET /api/v1/objects/{id}/trajectory") {
      const id = request.path.split("/").slice(-2)[0];
      const fixes = world.fixes
        .filter((f) => f.object_id === id)
        .filter((f) => (q.from ? f.timestamp >= Number(q.from) : true))
        .filter((f) => (q.to ? f.timestamp <= Number(q.to) : true))
        .sort((a, b) => a.timestamp - b.timestamp);
      if (world.fixes.every((f) => f.object_id !== id)) {
        return { status: 404, body: ERROR_BODY("not_found", `unknown object '${id}'`) };
      }
      return { status: 200, body: { object_id: id, fixes } };
    }
    if (key === "GET /api/v1/anomalies") {
      const bbox = parseBbox(q.bbox);
      const anomalies = world.anomalies.filter((a) => inBbox(a.lat, a.lon, bbox));
      return { status: 200, body: { anomalies, count: anomalies.length } };
    }
    if (key === "GET /api/v1/anomalies/{id}/explanation") {
      const id = request.path.split("/").slice(-2)[0];
      const anomaly = world.anomalies.find((a) => a.anomaly_id === id);
      if (!anomaly) {
        return { status: 404, body: ERROR_BODY("not_found", `unknown anomaly '${id}'`) };
      }
      return { status: 200, body: anomaly.explanation };
    }
    if (key === "POST /api/v1/detect") {
      const body = request.body as { object_id: string; from_ts: number; to_ts: number };
      const anomalies = world.anomalies.filter(
        (a) => a.object_id === body.object_id
          && a.start_ts <= body.to_ts && body.from_ts <= a.end_ts,
      );
      return { status: 200, body: { anomalies, count: anomalies.length } };
    }
    if (key === "POST /api/v1/labels") {
      const body = request.body as Record<string, unknown>;
      if (body.verdict === "anomalous" && !body.kind) {
        return {
          status: 400,
          body: ERROR_BODY("invalid_input", "anomalous label requires a kind"),
        };
      }
      labels.push(body);
      const id = `lb-${String(labels.length).padStart(6, "0")}`;
      return { status: 201, body: { label_id: id } };
    }
    return { status: 400, body: ERROR_BODY("no_canned_example", `unhandled ${key}`) };
  };
}

/** A deterministic seeded world: three objects, one trajectory each, two anomalies. */
export function demoWorld(): World {
  const t0 = 1_700_000_000;
  const fixes: Fix[] = [];
  const track = (
    id: string, type: string, source: string,
    lat0: number, lon0: number, dLat: number, n: number,
  ) => {
    for (let i = 0; i < n; i++) {
      fixes.push({
        object_id: id,
        lat: Number((lat0 + i * dLat).toFixed(6)),
        lon: Number((lon0 + i * 0.002).toFixed(6)),
        timestamp: t0 + i * 60,
        source,
        object_type: type,
        sog: 10.0,
        cog: 45.0,
      });
    }
  };
  track("mk-001", "vessel", "sensor", 40.0, -10.0, 0.003, 20);
  track("mk-002", "vessel", "crawler", 41.0, -11.0, 0.003, 20);
  track("mk-003", "structure", "sensor", 42.5, -12.5, 0.0, 20);

  const anomalies: AnomalyRecord[] = [
    {
      anomaly_id: "an-mock-speed",
      object_id: "mk-001",
      kind: "excessive_speed",
      severity: 1.0,
      start_ts: t0 + 300,
      end_ts: t0 + 600,
      lat: 40.015,
      lon: -9.99,
      model_id: "rule-detector:1",
      explanation: {
        summary: "max implied speed 45.2 kn vs limit 30.0 kn",
        steps: [
          { rule_or_feature: "excessive_speed", observed: 45.2,
            threshold_or_baseline: 30.0, contribution: 1.0, fired: true },
          { rule_or_feature: "ais_gap", observed: 60.0,
            threshold_or_baseline: 21600.0, contribution: 0.0, fired: false },
        ],
      },
    },
    {
      anomaly_id: "an-mock-outlier",
      object_id: "mk-002",
      kind: "kinematic_outlier",
      severity: 0.82,
      start_ts: t0 + 600,
      end_ts: t0 + 1140,
      lat: 41.03,
      lon: -10.98,
      model_id: "ml-detector:1",
      explanation: {
        summary: "robust z-score 17.5 vs threshold 10.7; largest deviation in implied_speed_kn",
        steps: [
          { rule_or_feature: "implied_speed_kn", observed: 38.1,
            threshold_or_baseline: 10.2, contribution: 12.4, fired: true },
          { rule_or_feature: "turn_rate_deg_per_min", observed: 2.4,
            threshold_or_baseline: 0.9, contribution: 2.6, fired: false },
          { rule_or_feature: "reported_sog_kn", observed: 15.0,
            threshold_or_baseline: 10.1, contribution: 2.5, fired: false },
        ],
      },
    },
  ];

  const objects: ObjectInfo[] = [
    { object_id: "mk-001", object_type: "vessel",
      metadata: { name: "Meridian Star", flag: "PT", callsign: "OG0001" } },
    { object_id: "mk-002", object_type: "vessel", metadata: {} },
    { object_id: "mk-003", object_type: "structure",
      metadata: { name: "Buoy 7" } },
  ];

  return { fixes, objects, anomalies };
}
