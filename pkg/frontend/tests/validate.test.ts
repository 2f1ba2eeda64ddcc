import { describe, expect, it } from "vitest";

import { readFileSync } from "node:fs";

import { loadContract, matchEndpoint } from "../src/contract.js";
import { validateHttpExchange } from "../src/validate.js";

const contractDoc = JSON.parse(
  readFileSync(new URL("../../contracts/api-v1.json", import.meta.url), "utf-8"),
);
const contract = loadContract(contractDoc);

const get = (path: string, query: Record<string, string> = {}) => ({
  method: "GET", path, query, body: null,
});

describe("endpoint matching", () => {
  it("matches concrete ids against path templates", () => {
    const e = matchEndpoint(contract, "GET", "/api/v1/objects/v-17");
    expect(e?.path).toBe("/api/v1/objects/{id}");
  });

  it("rejects undeclared paths", () => {
    expect(matchEndpoint(contract, "GET", "/api/v1/nonsense")).toBeNull();
  });

  it("distinguishes methods", () => {
    expect(matchEndpoint(contract, "POST", "/api/v1/geolocations")).toBeNull();
  });
});

describe("exchange validation", () => {
  it("accepts a conforming anomalies exchange", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/anomalies"), {
      status: 200,
      body: { anomalies: [], count: 0 },
    });
    expect(violations).toEqual([]);
  });

  it("flags an undocumented response field", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/anomalies"), {
      status: 200,
      body: { anomalies: [], count: 0, debug: "x" },
    });
    expect(violations.map((v) => v.kind)).toEqual(["extra_field"]);
  });

  it("flags a non-numeric timestamp query param", () => {
    const violations = validateHttpExchange(
      contract,
      get("/api/v1/anomalies", { from: "yesterday" }),
      { status: 200, body: { anomalies: [], count: 0 } },
    );
    expect(violations.map((v) => v.kind)).toEqual(["type_mismatch"]);
    expect(violations[0].location).toContain("?from");
  });

  it("flags an undeclared status as protocol", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/anomalies"), {
      status: 418,
      body: {},
    });
    expect(violations.map((v) => v.kind)).toEqual(["protocol"]);
  });

  it("flags an undeclared path as protocol", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/nonsense"), {
      status: 200,
      body: {},
    });
    expect(violations.map((v) => v.kind)).toEqual(["protocol"]);
  });

  it("flags a missing required field in the response", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/health"), {
      status: 200,
      body: { status: "ok", model_id: "rule-detector:1" }, // contract field absent
    });
    expect(violations.map((v) => v.kind)).toEqual(["missing_field"]);
  });

  it("type-checks nested arrays of objects", () => {
    const violations = validateHttpExchange(contract, get("/api/v1/geolocations"), {
      status: 200,
      body: {
        fixes: [{ object_id: "v-1", lat: "forty", lon: -10.0, timestamp: 1_700_000_000,
                  source: "sensor", object_type: "vessel" }],
        count: 1,
      },
    });
    expect(violations.map((v) => v.kind)).toEqual(["type_mismatch"]);
    expect(violations[0].location).toContain("fixes[0]/lat");
  });

  it("validates request bodies against the declared schema", () => {
    const violations = validateHttpExchange(
      contract,
      { method: "POST", path: "/api/v1/detect", query: {},
        body: { object_id: "v-1", from_ts: "soon", to_ts: 2 } },
      { status: 200, body: { anomalies: [], count: 0 } },
    );
    expect(violations.map((v) => v.kind)).toEqual(["type_mismatch"]);
    expect(violations[0].location).toContain("#request/from_ts");
  });
});
