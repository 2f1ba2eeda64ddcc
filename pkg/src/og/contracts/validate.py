"""Validators for data records, model registry entries, and HTTP exchanges."""

from __future__ import annotations

import json
from pathlib import Path

from .types import (
    CodeContract,
    ContractDefinitionError,
    DataContract,
    Endpoint,
    ModelContract,
    Violation,
)

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> str:
    """64-bit FNV-1a checksum, hex-encoded."""
    h = FNV64_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def checksum_file(path: str | Path) -> str:
    return fnv1a_64(Path(path).read_bytes())


def _type_ok(value, ftype: str, enum_values=()) -> bool:
    if ftype == "string":
        return isinstance(value, str)
    if ftype == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if ftype == "float":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if ftype == "timestamp":
        return isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0
    if ftype == "enum":
        return isinstance(value, str) and value in enum_values
    if ftype == "map":
        return isinstance(value, dict) and all(
            isinstance(k, str) and isinstance(v, str) for k, v in value.items()
        )
    raise ContractDefinitionError(f"unknown field type {ftype!r}")


def validate_record(contract: DataContract, record: dict, location: str = "") -> list[Violation]:
    """Check one record against a data contract.

    Violations come back in field declaration order. Extra fields are
    tolerated (tolerant reader at ingestion boundaries).
    """
    if not isinstance(record, dict):
        return [
            Violation(contract.name, contract.version, location or "record", "type_mismatch",
                      f"record is {type(record).__name__}, expected object")
        ]
    violations = []
    bounds = {b.field: b for b in contract.distribution_bounds}
    for f in contract.fields:
        loc = f"{location}/{f.name}" if location else f.name
        if f.name not in record or record[f.name] is None:
            if f.required:
                violations.append(
                    Violation(contract.name, contract.version, loc, "missing_field",
                              f"required field {f.name!r} absent")
                )
            continue
        value = record[f.name]
        if not _type_ok(value, f.type, f.enum_values):
            violations.append(
                Violation(contract.name, contract.version, loc, "type_mismatch",
                          f"field {f.name!r} expected {f.type}, got {value!r}")
            )
            continue
        b = bounds.get(f.name)
        if b is not None and not (b.min <= value <= b.max):
            violations.append(
                Violation(contract.name, contract.version, loc, "bounds",
                          f"field {f.name!r} value {value} outside [{b.min}, {b.max}]")
            )
    return violations


def validate_model_dir(contract: ModelContract, model_dir: str | Path) -> list[Violation]:
    """Check a model registry entry: manifest, format tag, features, hyperparameters, checksum."""
    model_dir = Path(model_dir)
    manifest_path = model_dir / "manifest.json"
    params_path = model_dir / "params.json"
    cname, cver = contract.name, contract.version

    if not manifest_path.is_file():
        return [Violation(cname, cver, str(manifest_path), "protocol", "manifest.json missing")]
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return [Violation(cname, cver, str(manifest_path), "protocol", f"manifest unreadable: {exc}")]

    violations = []
    if manifest.get("file_format") != contract.file_format:
        violations.append(
            Violation(cname, cver, "manifest/file_format", "protocol",
                      f"format tag {manifest.get('file_format')!r}, expected {contract.file_format!r}")
        )
    declared = [(f["name"], f["type"]) for f in manifest.get("features", [])]
    expected = list(contract.input_features)
    if declared != expected:
        violations.append(
            Violation(cname, cver, "manifest/input_features", "type_mismatch",
                      f"feature list {declared} != contract {expected} (names and order)")
        )
    hp = manifest.get("hyperparameters", {})
    for key in contract.hyperparameter_keys:
        if key not in hp:
            violations.append(
                Violation(cname, cver, f"manifest/hyperparameters/{key}", "missing_field",
                          f"declared hyperparameter {key!r} absent")
            )
    if not params_path.is_file():
        violations.append(Violation(cname, cver, str(params_path), "protocol", "params.json missing"))
    else:
        actual = checksum_file(params_path)
        recorded = manifest.get("params_checksum")
        if actual != recorded:
            violations.append(
                Violation(cname, cver, "manifest/params_checksum", "protocol",
                          f"checksum mismatch: manifest {recorded}, file {actual}")
            )
    return violations


def _match_endpoint(contract: CodeContract, method: str, path: str) -> Endpoint | None:
    parts = tuple(p for p in path.split("?")[0].split("/") if p)
    for e in contract.endpoints:
        if e.method != method.upper():
            continue
        tpl = e.path_parts()
        if len(tpl) != len(parts):
            continue
        if all(t.startswith("{") or t == p for t, p in zip(tpl, parts)):
            return e
    return None


def _param_ok(value: str, ptype: str) -> bool:
    if ptype in ("int", "timestamp"):
        try:
            int(value)
        except ValueError:
            return False
        return True
    if ptype == "float":
        try:
            float(value)
        except ValueError:
            return False
        return True
    return isinstance(value, str)  # string, csv: any text


def _check_schema(value, schema: dict, loc: str, cname: str, cver: int) -> list[Violation]:
    stype = schema.get("type", "any")
    out: list[Violation] = []
    if stype == "any":
        return out
    if stype == "object":
        if not isinstance(value, dict):
            return [Violation(cname, cver, loc, "type_mismatch",
                              f"expected object, got {type(value).__name__}")]
        fields = schema.get("fields", {})
        required = set(schema.get("required", fields.keys()))
        for name in fields:
            floc = f"{loc}/{name}"
            if name not in value or value[name] is None:
                if name in required:
                    out.append(Violation(cname, cver, floc, "missing_field",
                                         f"required field {name!r} absent"))
                continue
            out.extend(_check_schema(value[name], fields[name], floc, cname, cver))
        for name in value:
            if name not in fields:
                out.append(Violation(cname, cver, f"{loc}/{name}", "extra_field",
                                     f"undocumented field {name!r} emitted"))
        return out
    if stype == "array":
        if not isinstance(value, list):
            return [Violation(cname, cver, loc, "type_mismatch",
                              f"expected array, got {type(value).__name__}")]
        items = schema.get("items", {"type": "any"})
        for i, item in enumerate(value):
            out.extend(_check_schema(item, items, f"{loc}[{i}]", cname, cver))
        return out
    if stype == "map":
        if not isinstance(value, dict) or not all(isinstance(v, str) for v in value.values()):
            return [Violation(cname, cver, loc, "type_mismatch", "expected string map")]
        return out
    if stype == "bool":
        if not isinstance(value, bool):
            out.append(Violation(cname, cver, loc, "type_mismatch",
                                 f"expected bool, got {value!r}"))
        return out
    scalar = {"number": "float"}.get(stype, stype)
    if not _type_ok(value, scalar):
        out.append(Violation(cname, cver, loc, "type_mismatch",
                             f"expected {stype}, got {value!r}"))
    return out


def validate_http_exchange(contract: CodeContract, request: dict, response: dict) -> list[Violation]:
    """Check a recorded request/response pair against a code contract.

    request: {method, path, query: {str: str}, body}
    response: {status: int, body}
    """
    cname, cver = contract.name, contract.version
    endpoint = _match_endpoint(contract, request.get("method", "GET"), request.get("path", ""))
    violations = request_violations(contract, request)
    if endpoint is None:
        return violations
    loc_base = f"{endpoint.method} {endpoint.path}"
    status = response.get("status")
    if status not in endpoint.response_schemas:
        violations.append(Violation(cname, cver, f"{loc_base}#status", "protocol",
                                    f"status {status} not declared for this endpoint"))
    else:
        violations.extend(_check_schema(response.get("body"), endpoint.response_schemas[status],
                                        f"{loc_base}#response", cname, cver))
    return violations


def request_violations(contract: CodeContract, request: dict) -> list[Violation]:
    """Request-side checks only (used by the mock responder)."""
    cname, cver = contract.name, contract.version
    method = request.get("method", "GET")
    path = request.get("path", "")
    endpoint = _match_endpoint(contract, method, path)
    if endpoint is None:
        return [Violation(cname, cver, f"{method} {path}", "protocol",
                          "no endpoint matches this method and path")]
    loc_base = f"{endpoint.method} {endpoint.path}"
    declared_params = {p.name: p for p in endpoint.query_params}
    query = request.get("query", {}) or {}
    out = []
    for p in endpoint.query_params:
        if p.required and p.name not in query:
            out.append(Violation(cname, cver, f"{loc_base}?{p.name}", "missing_field",
                                 f"required query param {p.name!r} absent"))
    for name, value in query.items():
        if name not in declared_params:
            out.append(Violation(cname, cver, f"{loc_base}?{name}", "extra_field",
                                 f"undeclared query param {name!r}"))
        elif not _param_ok(value, declared_params[name].type):
            out.append(Violation(cname, cver, f"{loc_base}?{name}", "type_mismatch",
                                 f"query param {name!r}={value!r} not a valid "
                                 f"{declared_params[name].type}"))
    if endpoint.request_schema is not None and request.get("body") is not None:
        out.extend(_check_schema(request["body"], endpoint.request_schema,
                                 f"{loc_base}#request", cname, cver))
    return out


def match_endpoint(contract: CodeContract, method: str, path: str) -> Endpoint | None:
    return _match_endpoint(contract, method, path)
