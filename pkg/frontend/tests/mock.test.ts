import { describe, expect, it } from "vitest";

import { readFileSync } from "node:fs";

import { loadContract, ContractDefinitionError } from "../src/contract.js";
import { demoWorld, mockResponder, worldResponder } from "../src/mock.js";
import { HttpRequest, validateHttpExchange } from "../src/validate.js";

const contractDoc = JSON.parse(
  readFileSync(new URL("../../contracts/api-v1.json", import.meta.url), "utf-8"),
);
const contract = loadContract(contractDoc);

const HEALTH = {
  status: 200,
  body: { status: "ok", model_id: "rule-detector:1", contract: { name: "api-v1" } },
};

describe("canned mock responder", () => {
  it("returns the canned example for a conforming request", () => {
    const respond = mockResponder(contract, new Map([["GET /api/v1/health", HEALTH]]));
    const out = respond({ method: "GET", path: "/api/v1/health", query: {}, body: null });
    expect(out).toEqual(HEALTH);
  });

  it("answers 400 with violations for undeclared requests", () => {
    const respond = mockResponder(contract, new Map());
    const out = respond({ method: "GET", path: "/nope", query: {}, body: null });
    expect(out.status).toBe(400);
    expect((out.body as { error: { violations: unknown[] } }).error.violations.length)
      .toBeGreaterThan(0);
  });

  it("rejects non-conforming canned examples at construction", () => {
    expect(() =>
      mockResponder(contract, new Map([
        ["GET /api/v1/health", { status: 200, body: { status: 7 } }],
      ])),
    ).toThrow(ContractDefinitionError);
  });

  it("rejects canned examples for undeclared endpoints", () => {
    expect(() =>
      mockResponder(contract, new Map([
        ["GET /api/v1/made-up", { status: 200, body: {} }],
      ])),
    ).toThrow(ContractDefinitionError);
  });
});

describe("world responder self-consistency", () => {
  const respond = worldResponder(contract, demoWorld());

  const requests: HttpRequest[] = [
    { method: "GET", path: "/api/v1/health", query: {}, body: null },
    { method: "GET", path: "/api/v1/geolocations",
      query: { bbox: "39.000000,-13.000000,43.000000,-9.000000" }, body: null },
    { method: "GET", path: "/api/v1/geolocations",
      query: { sources: "sensor", types: "vessel" }, body: null },
    { method: "GET", path: "/api/v1/anomalies", query: {}, body: null },
    { method: "GET", path: "/api/v1/anomalies/an-mock-speed/explanation",
      query: {}, body: null },
    { method: "GET", path: "/api/v1/objects/mk-001", query: {}, body: null },
    { method: "GET", path: "/api/v1/objects/mk-001/trajectory", query: {}, body: null },
    { method: "GET", path: "/api/v1/objects/ghost", query: {}, body: null },
    { method: "POST", path: "/api/v1/detect", query: {},
      body: { object_id: "mk-001", from_ts: 1_700_000_000, to_ts: 1_700_001_200 } },
    { method: "POST", path: "/api/v1/labels", query: {},
      body: { object_id: "mk-001", start_ts: 1_700_000_300, end_ts: 1_700_000_600,
              verdict: "anomalous", kind: "excessive_speed" } },
  ];

  for (const request of requests) {
    it(`answers ${request.method} ${request.path} within the contract`, () => {
      const response = respond(request);
      expect(validateHttpExchange(contract, request, response)).toEqual([]);
    });
  }

  it("filters geolocations by source like a brute-force scan", () => {
    const world = demoWorld();
    const response = respond({
      method: "GET", path: "/api/v1/geolocations",
      query: { sources: "crawler" }, body: null,
    });
    const fixes = (response.body as { fixes: Array<{ source: string }> }).fixes;
    const oracle = world.fixes.filter((f) => f.source === "crawler");
    expect(fixes.length).toBe(oracle.length);
    expect(fixes.every((f) => f.source === "crawler")).toBe(true);
  });

  it("rejects anomalous labels without a kind", () => {
    const response = respond({
      method: "POST", path: "/api/v1/labels", query: {},
      body: { object_id: "mk-001", start_ts: 1, end_ts: 2, verdict: "anomalous" },
    });
    expect(response.status).toBe(400);
  });
});
