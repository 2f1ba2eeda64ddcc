/** Code-contract document types and endpoint matching. */

export interface QueryParam {
  name: string;
  required: boolean;
  type: string; // string | int | timestamp | csv | float
}

export interface Schema {
  type?: string; // object | array | map | string | int | number | timestamp | bool | any
  fields?: Record<string, Schema>;
  required?: string[];
  items?: Schema;
}

export interface Endpoint {
  method: string;
  path: string;
  query_params: QueryParam[];
  request_schema: Schema | null;
  response_schemas: Record<string, Schema>;
}

export interface ContractDocument {
  schema: string;
  kind: string;
  name: string;
  version: number;
  body: { endpoints: Endpoint[] };
}

export class ContractDefinitionError extends Error {}

export function loadContract(doc: ContractDocument): ContractDocument {
  if (doc.schema !== "og-contract/1") {
    throw new ContractDefinitionError(`unknown contract schema ${doc.schema}`);
  }
  if (doc.kind !== "code" || !doc.body || !Array.isArray(doc.body.endpoints)) {
    throw new ContractDefinitionError("not a code contract document");
  }
  return doc;
}

function pathParts(path: string): string[] {
  return path.split("?")[0].split("/").filter((p) => p.length > 0);
}

/** Find the declared endpoint matching a concrete method and path, if any. */
export function matchEndpoint(
  contract: ContractDocument,
  method: string,
  path: string,
): Endpoint | null {
  const parts = pathParts(path);
  for (const e of contract.body.endpoints) {
    if (e.method !== method.toUpperCase()) continue;
    const tpl = pathParts(e.path);
    if (tpl.length !== parts.length) continue;
    if (tpl.every((t, i) => t.startsWith("{") || t === parts[i])) return e;
  }
  return null;
}
