"""Machine-checkable code, data, and model contract definitions."""

from __future__ import annotations

from dataclasses import dataclass, field


class ContractDefinitionError(ValueError):
    """The contract itself is malformed (distinct from a record violating it)."""


@dataclass(frozen=True)
class Violation:
    contract: str
    version: int
    location: str
    kind: str  # missing_field | type_mismatch | bounds | extra_field | protocol
    message: str

    def __post_init__(self):
        if not self.message:
            raise ContractDefinitionError("violation message must be non-empty")

    def as_line(self) -> str:
        return f"{self.kind}\t{self.location}\t{self.message}"

    def to_record(self) -> dict:
        return {
            "contract": self.contract,
            "version": self.version,
            "location": self.location,
            "kind": self.kind,
            "message": self.message,
        }


VALID_FIELD_TYPES = {"string", "int", "float", "timestamp", "enum", "map"}


@dataclass(frozen=True)
class FieldSpec:
    name: str
    type: str
    required: bool = True
    enum_values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.type not in VALID_FIELD_TYPES:
            raise ContractDefinitionError(f"unknown field type {self.type!r} for {self.name!r}")
        if self.type == "enum" and not self.enum_values:
            raise ContractDefinitionError(f"enum field {self.name!r} declares no values")


@dataclass(frozen=True)
class Bound:
    field: str
    min: float
    max: float


@dataclass(frozen=True)
class DataContract:
    name: str
    version: int
    fields: tuple[FieldSpec, ...]
    distribution_bounds: tuple[Bound, ...] = ()
    read_protocol: str = "jsonl_scan"
    write_protocol: str = "jsonl_append"

    def __post_init__(self):
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise ContractDefinitionError(f"duplicate field names in contract {self.name!r}")
        numeric = {f.name for f in self.fields if f.type in ("int", "float", "timestamp")}
        for b in self.distribution_bounds:
            if b.field not in numeric:
                raise ContractDefinitionError(
                    f"bound on {b.field!r} does not reference a declared numeric field"
                )

    def to_body(self) -> dict:
        return {
            "fields": [
                {
                    "name": f.name,
                    "type": f.type,
                    "required": f.required,
                    **({"values": list(f.enum_values)} if f.type == "enum" else {}),
                }
                for f in self.fields
            ],
            "distribution_bounds": [
                {"field": b.field, "min": b.min, "max": b.max} for b in self.distribution_bounds
            ],
            "read_protocol": self.read_protocol,
            "write_protocol": self.write_protocol,
        }

    @classmethod
    def from_body(cls, name: str, version: int, body: dict) -> "DataContract":
        return cls(
            name=name,
            version=version,
            fields=tuple(
                FieldSpec(
                    name=f["name"],
                    type=f["type"],
                    required=f.get("required", True),
                    enum_values=tuple(f.get("values", ())),
                )
                for f in body["fields"]
            ),
            distribution_bounds=tuple(
                Bound(field=b["field"], min=b["min"], max=b["max"])
                for b in body.get("distribution_bounds", ())
            ),
            read_protocol=body.get("read_protocol", "jsonl_scan"),
            write_protocol=body.get("write_protocol", "jsonl_append"),
        )


@dataclass(frozen=True)
class ModelContract:
    name: str
    version: int
    input_features: tuple[tuple[str, str], ...]  # (name, type)
    hyperparameter_keys: tuple[str, ...] = ()
    file_format: str = "manifest_json_v1"

    def __post_init__(self):
        if not self.input_features:
            raise ContractDefinitionError("model contract requires at least one input feature")

    def to_body(self) -> dict:
        return {
            "input_features": [{"name": n, "type": t} for n, t in self.input_features],
            "output_schema": {"score": "float_unit_interval", "explanation": "required"},
            "file_format": self.file_format,
            "hyperparameters": list(self.hyperparameter_keys),
        }

    @classmethod
    def from_body(cls, name: str, version: int, body: dict) -> "ModelContract":
        return cls(
            name=name,
            version=version,
            input_features=tuple((f["name"], f["type"]) for f in body["input_features"]),
            hyperparameter_keys=tuple(body.get("hyperparameters", ())),
            file_format=body.get("file_format", "manifest_json_v1"),
        )


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str  # string | int | float | timestamp | csv
    required: bool = False


@dataclass(frozen=True)
class Endpoint:
    method: str
    path: str  # template, e.g. /api/v1/objects/{id}
    query_params: tuple[ParamSpec, ...] = ()
    request_schema: dict | None = None
    response_schemas: dict = field(default_factory=dict)  # status code (int) -> schema

    def path_parts(self) -> tuple[str, ...]:
        return tuple(p for p in self.path.split("/") if p)


@dataclass(frozen=True)
class CodeContract:
    name: str
    version: int
    endpoints: tuple[Endpoint, ...]

    def __post_init__(self):
        keys = [(e.method, e.path) for e in self.endpoints]
        if len(keys) != len(set(keys)):
            raise ContractDefinitionError("duplicate (method, path) in code contract")

    def to_body(self) -> dict:
        return {
            "endpoints": [
                {
                    "method": e.method,
                    "path": e.path,
                    "query_params": [
                        {"name": p.name, "type": p.type, "required": p.required}
                        for p in e.query_params
                    ],
                    "request_schema": e.request_schema,
                    "response_schemas": {str(k): v for k, v in e.response_schemas.items()},
                }
                for e in self.endpoints
            ]
        }

    @classmethod
    def from_body(cls, name: str, version: int, body: dict) -> "CodeContract":
        return cls(
            name=name,
            version=version,
            endpoints=tuple(
                Endpoint(
                    method=e["method"],
                    path=e["path"],
                    query_params=tuple(
                        ParamSpec(name=p["name"], type=p["type"], required=p.get("required", False))
                        for p in e.get("query_params", ())
                    ),
                    request_schema=e.get("request_schema"),
                    response_schemas={int(k): v for k, v in e.get("response_schemas", {}).items()},
                )
                for e in body["endpoints"]
            ),
        )
