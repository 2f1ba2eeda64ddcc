"""The contracts shipped with this installation, one per governed boundary."""

from __future__ import annotations

from .types import Bound, CodeContract, DataContract, Endpoint, FieldSpec, ModelContract, ParamSpec

_SOURCES = ("provider", "sensor", "crawler", "synthetic")
_OBJECT_TYPES = ("vessel", "structure", "unidentified")
_ANOMALY_KINDS = (
    "excessive_speed",
    "ais_gap",
    "impossible_jump",
    "zone_violation",
    "kinematic_outlier",
)

_FIX_FIELDS = (
    FieldSpec("object_id", "string"),
    FieldSpec("lat", "float"),
    FieldSpec("lon", "float"),
    FieldSpec("timestamp", "timestamp"),
    FieldSpec("source", "enum", enum_values=_SOURCES),
    FieldSpec("object_type", "enum", enum_values=_OBJECT_TYPES),
    FieldSpec("sog", "float", required=False),
    FieldSpec("cog", "float", required=False),
)

_FIX_BOUNDS = (
    Bound("lat", -90.0, 90.0),
    Bound("lon", -180.0, 180.0),
    Bound("sog", 0.0, 1000.0),
    Bound("cog", 0.0, 360.0),
)

RAW_DATA_CONTRACT = DataContract(
    name="raw-data", version=1, fields=_FIX_FIELDS, distribution_bounds=_FIX_BOUNDS
)

# Data Store snapshots share the fix record grammar with the raw store.
SNAPSHOT_CONTRACT = DataContract(
    name="data-snapshot", version=1, fields=_FIX_FIELDS, distribution_bounds=_FIX_BOUNDS
)

LABEL_CONTRACT = DataContract(
    name="labels",
    version=1,
    fields=(
        FieldSpec("object_id", "string"),
        FieldSpec("start_ts", "timestamp"),
        FieldSpec("end_ts", "timestamp"),
        FieldSpec("verdict", "enum", enum_values=("anomalous", "normal")),
        FieldSpec("kind", "enum", required=False, enum_values=_ANOMALY_KINDS),
        FieldSpec("annotator", "enum", enum_values=("provider", "investigator")),
        FieldSpec("note", "string", required=False),
    ),
)

# Anti-corruption boundary: what upstream crawled documents must look like.
CRAWLER_CONTRACT = DataContract(
    name="crawler-upstream",
    version=1,
    fields=(
        FieldSpec("id", "string"),
        FieldSpec("lat", "float"),
        FieldSpec("lon", "float"),
        FieldSpec("ts", "timestamp"),
        FieldSpec("type", "enum", required=False, enum_values=_OBJECT_TYPES),
        FieldSpec("sog", "float", required=False),
        FieldSpec("cog", "float", required=False),
    ),
    distribution_bounds=(Bound("lat", -90.0, 90.0), Bound("lon", -180.0, 180.0)),
)

PREDICTION_CONTRACT = DataContract(
    name="predictions",
    version=1,
    fields=(
        FieldSpec("anomaly_id", "string"),
        FieldSpec("object_id", "string"),
        FieldSpec("kind", "enum", enum_values=_ANOMALY_KINDS),
        FieldSpec("severity", "float"),
        FieldSpec("start_ts", "timestamp"),
        FieldSpec("end_ts", "timestamp"),
        FieldSpec("lat", "float"),
        FieldSpec("lon", "float"),
        FieldSpec("model_id", "string"),
        # nested explanation object rides along as a tolerated extra field
    ),
    distribution_bounds=(Bound("severity", 0.0, 1.0),),
)

TELEMETRY_CONTRACT = DataContract(
    name="telemetry",
    version=1,
    fields=(
        FieldSpec("ts", "timestamp"),
        FieldSpec("endpoint", "string"),
        FieldSpec("latency_ms", "float"),
        FieldSpec("status", "int"),
    ),
    distribution_bounds=(Bound("latency_ms", 0.0, 1e9),),
)

METADATA_CONTRACT = DataContract(
    name="training-runs",
    version=1,
    fields=(
        FieldSpec("run_id", "string"),
        FieldSpec("pipeline", "enum", enum_values=("rule", "ml")),
        FieldSpec("data_snapshot_id", "string"),
        FieldSpec("started_ts", "timestamp"),
        FieldSpec("ended_ts", "timestamp"),
    ),
)

MODEL_CONTRACT = ModelContract(
    name="detector",
    version=1,
    input_features=(
        ("implied_speed_kn", "float"),
        ("turn_rate_deg_per_min", "float"),
        ("reported_sog_kn", "float"),
    ),
)

_ERROR_SCHEMA = {
    "type": "object",
    "fields": {
        "error": {
            "type": "object",
            "fields": {
                "kind": {"type": "string"},
                "message": {"type": "string"},
                "violations": {"type": "array", "items": {"type": "any"}},
            },
            "required": ["kind", "message"],
        }
    },
    "required": ["error"],
}

_FIX_SCHEMA = {
    "type": "object",
    "fields": {
        "object_id": {"type": "string"},
        "lat": {"type": "number"},
        "lon": {"type": "number"},
        "timestamp": {"type": "timestamp"},
        "source": {"type": "string"},
        "object_type": {"type": "string"},
        "sog": {"type": "number"},
        "cog": {"type": "number"},
    },
    "required": ["object_id", "lat", "lon", "timestamp", "source", "object_type"],
}

_STEP_SCHEMA = {
    "type": "object",
    "fields": {
        "rule_or_feature": {"type": "string"},
        "observed": {"type": "number"},
        "threshold_or_baseline": {"type": "number"},
        "contribution": {"type": "number"},
        "fired": {"type": "bool"},
    },
}

_EXPLANATION_SCHEMA = {
    "type": "object",
    "fields": {
        "steps": {"type": "array", "items": _STEP_SCHEMA},
        "summary": {"type": "string"},
    },
}

_ANOMALY_SCHEMA = {
    "type": "object",
    "fields": {
        "anomaly_id": {"type": "string"},
        "object_id": {"type": "string"},
        "kind": {"type": "string"},
        "severity": {"type": "number"},
        "start_ts": {"type": "timestamp"},
        "end_ts": {"type": "timestamp"},
        "lat": {"type": "number"},
        "lon": {"type": "number"},
        "model_id": {"type": "string"},
        "explanation": _EXPLANATION_SCHEMA,
    },
}

_BBOX_PARAMS = (
    ParamSpec("bbox", "csv"),
    ParamSpec("from", "timestamp"),
    ParamSpec("to", "timestamp"),
)

API_CONTRACT = CodeContract(
    name="api-v1",
    version=1,
    endpoints=(
        Endpoint(
            method="GET",
            path="/api/v1/geolocations",
            query_params=_BBOX_PARAMS
            + (
                ParamSpec("sources", "csv"),
                ParamSpec("types", "csv"),
                ParamSpec("cursor", "string"),
                ParamSpec("limit", "int"),
            ),
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "fixes": {"type": "array", "items": _FIX_SCHEMA},
                        "next_cursor": {"type": "string"},
                        "count": {"type": "int"},
                    },
                    "required": ["fixes", "count"],
                },
                400: _ERROR_SCHEMA,
                401: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="GET",
            path="/api/v1/objects/{id}",
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "object_id": {"type": "string"},
                        "object_type": {"type": "string"},
                        "metadata": {"type": "map"},
                    },
                },
                401: _ERROR_SCHEMA,
                404: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="GET",
            path="/api/v1/objects/{id}/trajectory",
            query_params=(ParamSpec("from", "timestamp"), ParamSpec("to", "timestamp")),
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "object_id": {"type": "string"},
                        "fixes": {"type": "array", "items": _FIX_SCHEMA},
                    },
                },
                400: _ERROR_SCHEMA,
                401: _ERROR_SCHEMA,
                404: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="GET",
            path="/api/v1/anomalies",
            query_params=_BBOX_PARAMS,
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "anomalies": {"type": "array", "items": _ANOMALY_SCHEMA},
                        "count": {"type": "int"},
                    },
                },
                400: _ERROR_SCHEMA,
                401: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="GET",
            path="/api/v1/anomalies/{id}/explanation",
            response_schemas={
                200: _EXPLANATION_SCHEMA,
                401: _ERROR_SCHEMA,
                404: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="POST",
            path="/api/v1/detect",
            request_schema={
                "type": "object",
                "fields": {
                    "object_id": {"type": "string"},
                    "from_ts": {"type": "timestamp"},
                    "to_ts": {"type": "timestamp"},
                    "model": {"type": "string"},
                },
                "required": ["object_id", "from_ts", "to_ts"],
            },
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "anomalies": {"type": "array", "items": _ANOMALY_SCHEMA},
                        "count": {"type": "int"},
                    },
                },
                400: _ERROR_SCHEMA,
                401: _ERROR_SCHEMA,
                422: _ERROR_SCHEMA,
                503: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="POST",
            path="/api/v1/labels",
            request_schema={
                "type": "object",
                "fields": {
                    "object_id": {"type": "string"},
                    "start_ts": {"type": "timestamp"},
                    "end_ts": {"type": "timestamp"},
                    "verdict": {"type": "string"},
                    "kind": {"type": "string"},
                    "note": {"type": "string"},
                },
                "required": ["object_id", "start_ts", "end_ts", "verdict"],
            },
            response_schemas={
                201: {"type": "object", "fields": {"label_id": {"type": "string"}}},
                400: _ERROR_SCHEMA,
                401: _ERROR_SCHEMA,
            },
        ),
        Endpoint(
            method="GET",
            path="/api/v1/health",
            response_schemas={
                200: {
                    "type": "object",
                    "fields": {
                        "status": {"type": "string"},
                        "model_id": {"type": "string"},
                        "contract": {"type": "any"},
                    },
                },
            },
        ),
    ),
)

ALL_CONTRACTS = (
    RAW_DATA_CONTRACT,
    SNAPSHOT_CONTRACT,
    LABEL_CONTRACT,
    CRAWLER_CONTRACT,
    PREDICTION_CONTRACT,
    TELEMETRY_CONTRACT,
    METADATA_CONTRACT,
    MODEL_CONTRACT,
    API_CONTRACT,
)
