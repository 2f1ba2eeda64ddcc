/** HTTP exchange validation against a code contract.
 *
 * Mirrors the server-side validator: same violation kinds, same locations,
 * so a session captured here can be replayed through either implementation.
 */

import {
  ContractDocument,
  Endpoint,
  matchEndpoint,
  QueryParam,
  Schema,
} from "./contract.js";

export interface Violation {
  contract: string;
  version: number;
  location: string;
  kind: "missing_field" | "type_mismatch" | "bounds" | "extra_field" | "protocol";
  message: string;
}

export interface HttpRequest {
  method: string;
  path: string;
  query: Record<string, string>;
  body: unknown;
}

export interface HttpResponse {
  status: number;
  body: unknown;
}

export interface Exchange {
  request: HttpRequest;
  response: HttpResponse;
}

function isPlainObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function scalarOk(value: unknown, type: string): boolean {
  switch (type) {
    case "string":
      return typeof value === "string";
    case "int":
      return typeof value === "number" && Number.isInteger(value);
    case "number":
      return typeof value === "number" && Number.isFinite(value);
    case "timestamp":
      return typeof value === "number" && Number.isFinite(value) && value > 0;
    default:
      return false;
  }
}

function paramOk(value: string, type: string): boolean {
  if (type === "int" || type === "timestamp") return /^-?\d+$/.test(value);
  if (type === "float") return value !== "" && !Number.isNaN(Number(value));
  return true; // string, csv: any text
}

function checkSchema(
  value: unknown,
  schema: Schema,
  loc: string,
  cname: string,
  cver: number,
): Violation[] {
  const type = schema.type ?? "any";
  const out: Violation[] = [];
  const v = (location: string, kind: Violation["kind"], message: string) =>
    out.push({ contract: cname, version: cver, location, kind, message });

  if (type === "any") return out;
  if (type === "object") {
    if (!isPlainObject(value)) {
      v(loc, "type_mismatch", `expected object, got ${typeof value}`);
      return out;
    }
    const fields = schema.fields ?? {};
    const required = new Set(schema.required ?? Object.keys(fields));
    for (const name of Object.keys(fields)) {
      const floc = `${loc}/${name}`;
      if (!(name in value) || value[name] === null || value[name] === undefined) {
        if (required.has(name)) {
          v(floc, "missing_field", `required field '${name}' absent`);
        }
        continue;
      }
      out.push(...checkSchema(value[name], fields[name], floc, cname, cver));
    }
    for (const name of Object.keys(value)) {
      if (!(name in fields)) {
        v(`${loc}/${name}`, "extra_field", `undocumented field '${name}' emitted`);
      }
    }
    return out;
  }
  if (type === "array") {
    if (!Array.isArray(value)) {
      v(loc, "type_mismatch", `expected array, got ${typeof value}`);
      return out;
    }
    const items = schema.items ?? { type: "any" };
    value.forEach((item, i) =>
      out.push(...checkSchema(item, items, `${loc}[${i}]`, cname, cver)),
    );
    return out;
  }
  if (type === "map") {
    if (!isPlainObject(value) || Object.values(value).some((x) => typeof x !== "string")) {
      v(loc, "type_mismatch", "expected string map");
    }
    return out;
  }
  if (type === "bool") {
    if (typeof value !== "boolean") {
      v(loc, "type_mismatch", `expected bool, got ${JSON.stringify(value)}`);
    }
    return out;
  }
  if (!scalarOk(value, type)) {
    v(loc, "type_mismatch", `expected ${type}, got ${JSON.stringify(value)}`);
  }
  return out;
}

/** Request-side checks only (used by the mock responder). */
export function requestViolations(
  contract: ContractDocument,
  request: HttpRequest,
): Violation[] {
  const cname = contract.name;
  const cver = contract.version;
  const endpoint = matchEndpoint(contract, request.method, request.path);
  if (endpoint === null) {
    return [{
      contract: cname, version: cver,
      location: `${request.method} ${request.path}`,
      kind: "protocol",
      message: "no endpoint matches this method and path",
    }];
  }
  const locBase = `${endpoint.method} ${endpoint.path}`;
  const declared = new Map<string, QueryParam>(
    endpoint.query_params.map((p) => [p.name, p]),
  );
  const out: Violation[] = [];
  for (const p of endpoint.query_params) {
    if (p.required && !(p.name in request.query)) {
      out.push({
        contract: cname, version: cver, location: `${locBase}?${p.name}`,
        kind: "missing_field", message: `required query param '${p.name}' absent`,
      });
    }
  }
  for (const [name, value] of Object.entries(request.query)) {
    const param = declared.get(name);
    if (!param) {
      out.push({
        contract: cname, version: cver, location: `${locBase}?${name}`,
        kind: "extra_field", message: `undeclared query param '${name}'`,
      });
    } else if (!paramOk(value, param.type)) {
      out.push({
        contract: cname, version: cver, location: `${locBase}?${name}`,
        kind: "type_mismatch",
        message: `query param '${name}'='${value}' not a valid ${param.type}`,
      });
    }
  }
  if (endpoint.request_schema !== null && request.body !== null && request.body !== undefined) {
    out.push(...checkSchema(
      request.body, endpoint.request_schema, `${locBase}#request`, cname, cver,
    ));
  }
  return out;
}

/** Check one recorded request/response pair against the contract. */
export function validateHttpExchange(
  contract: ContractDocument,
  request: HttpRequest,
  response: HttpResponse,
): Violation[] {
  const endpoint: Endpoint | null = matchEndpoint(contract, request.method, request.path);
  const violations = requestViolations(contract, request);
  if (endpoint === null) return violations;
  const locBase = `${endpoint.method} ${endpoint.path}`;
  const schema = endpoint.response_schemas[String(response.status)];
  if (schema === undefined) {
    violations.push({
      contract: contract.name, version: contract.version,
      location: `${locBase}#status`, kind: "protocol",
      message: `status ${response.status} not declared for this endpoint`,
    });
  } else {
    violations.push(...checkSchema(
      response.body, schema, `${locBase}#response`, contract.name, contract.version,
    ));
  }
  return violations;
}
