"""Core use-case services. Depends on domain types and ports only.

The dependency rule is enforced by an architecture test: nothing in this
package may reference an adapter or a concrete external technology.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

from ...contracts import API_CONTRACT, LABEL_CONTRACT, contract_to_document, validate_record
from ...domain import AreaOfInterest, DomainError, GeoFix, ObjectType, Source, filter_fixes
from ..conf import ApiConfig
from ..ports import (
    CachePort,
    ConfigPort,
    ModelPort,
    RepositoryPort,
    SecurityPort,
    StoragePort,
    TelemetryPort,
    ThirdPartyPort,
)


class ApiError(Exception):
    """Domain-level failure; the web adapter maps `kind` onto a status code."""

    def __init__(self, kind: str, message: str, violations: list | None = None):
        self.kind = kind
        self.violations = violations or []
        super().__init__(message)
        self.message = message


@dataclass(frozen=True)
class PortSet:
    repository: RepositoryPort
    model: ModelPort
    storage: StoragePort
    config: ConfigPort
    security: SecurityPort
    telemetry: TelemetryPort
    cache: CachePort
    third_party: ThirdPartyPort | None = None


def _encode_cursor(ts: int, object_id: str) -> str:
    raw = json.dumps([ts, object_id]).encode("utf-8")
    return base64.urlsafe_b64encode(raw).decode("ascii")


def _decode_cursor(cursor: str) -> tuple[int, str]:
    try:
        ts, object_id = json.loads(base64.urlsafe_b64decode(cursor.encode("ascii")))
        return int(ts), str(object_id)
    except Exception as exc:
        raise ApiError("invalid_input", f"malformed cursor: {exc}") from exc


def _sorted_unique(fixes: list[GeoFix]) -> list[GeoFix]:
    seen = set()
    out = []
    for f in sorted(fixes, key=lambda f: (f.timestamp, f.object_id, f.lat, f.lon)):
        key = (f.object_id, f.timestamp, f.lat, f.lon)
        if key in seen:
            continue
        seen.add(key)
        out.append(f)
    return out


class CoreServices:
    """Use cases orchestrating the maritime domain objects through ports."""

    def __init__(self, ports: PortSet):
        self.ports = ports

    @property
    def config(self) -> ApiConfig:
        return self.ports.config.get()

    def authorize(self, token: str | None) -> None:
        if not self.ports.security.check(token):
            raise ApiError("unauthorized", "missing or invalid bearer token")

    # --- geolocations -----------------------------------------------------

    def get_geolocations(self, aoi: AreaOfInterest,
                         sources: set[Source] | None = None,
                         types: set[ObjectType] | None = None,
                         cursor: str | None = None,
                         limit: int | None = None) -> tuple[list[dict], str | None]:
        max_limit = self.config.page_limit_max
        limit = max_limit if limit is None else limit
        if not (1 <= limit <= max_limit):
            raise ApiError("invalid_input", f"limit must be in [1, {max_limit}]")
        fixes = [GeoFix.from_record(r) for r in self.ports.repository.all_fixes()]
        matching = _sorted_unique(filter_fixes(fixes, aoi, sources, types))
        if cursor is not None:
            after = _decode_cursor(cursor)
            matching = [f for f in matching if (f.timestamp, f.object_id) > after]
        page = matching[:limit]
        next_cursor = None
        if len(matching) > limit and page:
            next_cursor = _encode_cursor(page[-1].timestamp, page[-1].object_id)
        return [f.to_record() for f in page], next_cursor

    # --- objects ----------------------------------------------------------

    def get_object(self, object_id: str) -> dict:
        info = self.ports.repository.object_info(object_id)
        if info is None and self.ports.third_party is not None:
            info = self.ports.third_party.fetch_metadata(object_id)
        if info is None:
            # fall back to what the fixes themselves tell us
            fixes = self.ports.repository.fixes_for(object_id)
            if not fixes:
                raise ApiError("not_found", f"unknown marine object {object_id!r}")
            info = {
                "object_id": object_id,
                "object_type": fixes[-1].get("object_type", "unidentified"),
                "metadata": {},
            }
        return {
            "object_id": info["object_id"],
            "object_type": info.get("object_type", "unidentified"),
            "metadata": dict(info.get("metadata", {})),
        }

    def get_trajectory(self, object_id: str, from_ts: int | None = None,
                       to_ts: int | None = None) -> dict:
        if from_ts is not None and to_ts is not None and from_ts > to_ts:
            raise ApiError("invalid_input", "trajectory window is inverted (from > to)")
        records = self.ports.repository.fixes_for(object_id)
        if not records:
            raise ApiError("not_found", f"unknown marine object {object_id!r}")
        fixes = [GeoFix.from_record(r) for r in records]
        if from_ts is not None:
            fixes = [f for f in fixes if f.timestamp >= from_ts]
        if to_ts is not None:
            fixes = [f for f in fixes if f.timestamp <= to_ts]
        ordered = _sorted_unique(fixes)
        return {"object_id": object_id, "fixes": [f.to_record() for f in ordered]}

    # --- anomalies ---------------------------------------------------------

    def list_anomalies(self, aoi: AreaOfInterest) -> list[dict]:
        out = []
        for rec in self.ports.repository.anomalies():
            spatial = aoi.min_lat <= rec["lat"] <= aoi.max_lat and (
                (rec["lon"] >= aoi.min_lon or rec["lon"] <= aoi.max_lon)
                if aoi.wrap
                else aoi.min_lon <= rec["lon"] <= aoi.max_lon
            )
            if not spatial:
                continue
            if aoi.from_ts is not None and rec["end_ts"] < aoi.from_ts:
                continue
            if aoi.to_ts is not None and rec["start_ts"] > aoi.to_ts:
                continue
            out.append(rec)
        out.sort(key=lambda r: (r["start_ts"], r["anomaly_id"]))
        return out

    def get_explanation(self, anomaly_id: str) -> dict:
        rec = self.ports.repository.anomaly_by_id(anomaly_id)
        if rec is None:
            raise ApiError("not_found", f"unknown anomaly {anomaly_id!r}")
        return rec["explanation"]

    def detect_on_demand(self, object_id: str, from_ts: int, to_ts: int,
                         model_spec: str | None = None) -> list[dict]:
        if from_ts > to_ts:
            raise ApiError("invalid_input", "detection window is inverted (from_ts > to_ts)")
        config = self.config
        if model_spec:
            name, _, version = model_spec.partition(":")
            version = int(version) if version else "latest"
        else:
            name, version = config.model_name, config.model_version
        try:
            model_id = self.ports.model.resolve(name, version)
        except Exception as exc:
            raise ApiError("model_unavailable", f"cannot resolve model {name}: {exc}") from exc
        records = self.ports.repository.fixes_for(object_id)
        window = [r for r in records if from_ts <= r["timestamp"] <= to_ts]
        window.sort(key=lambda r: r["timestamp"])
        if len(window) < 2:
            raise ApiError("too_short", "trajectory window holds fewer than 2 fixes")
        anomalies = self.ports.model.detect(model_id, window)
        self.ports.repository.append_anomalies(anomalies)
        return anomalies

    # --- labels -----------------------------------------------------------

    def post_label(self, record: dict) -> str:
        record = dict(record)
        record["annotator"] = "investigator"
        violations = validate_record(LABEL_CONTRACT, record)
        if violations:
            raise ApiError("invalid_input", "label violates the label contract",
                           violations=[v.to_record() for v in violations])
        if int(record["start_ts"]) > int(record["end_ts"]):
            raise ApiError("invalid_input", "label window start > end")
        if record.get("verdict") == "anomalous" and not record.get("kind"):
            raise ApiError("invalid_input", "anomalous label requires a kind")
        return self.ports.repository.append_label(record)

    # --- health ------------------------------------------------------------

    def health(self) -> dict:
        config = self.config
        try:
            model_id = self.ports.model.resolve(config.model_name, config.model_version)
        except Exception:
            model_id = "unresolved"
        return {
            "status": "ok",
            "model_id": model_id,
            "contract": contract_to_document(API_CONTRACT),
        }


def parse_aoi(query: dict) -> AreaOfInterest:
    """Build an AOI from bbox/from/to query params; absent bbox means the whole globe."""
    from_ts = to_ts = None
    try:
        if query.get("from") is not None:
            from_ts = int(query["from"])
        if query.get("to") is not None:
            to_ts = int(query["to"])
    except ValueError as exc:
        raise ApiError("invalid_input", f"from/to must be UTC epoch seconds: {exc}") from exc
    bbox = query.get("bbox")
    if bbox is None:
        return AreaOfInterest.globe(from_ts=from_ts, to_ts=to_ts)
    parts = str(bbox).split(",")
    if len(parts) != 4:
        raise ApiError("invalid_input", "bbox must be minLat,minLon,maxLat,maxLon")
    try:
        min_lat, min_lon, max_lat, max_lon = (float(p) for p in parts)
        return AreaOfInterest(
            min_lat=min_lat, max_lat=max_lat, min_lon=min_lon, max_lon=max_lon,
            from_ts=from_ts, to_ts=to_ts,
            wrap=str(query.get("wrap", "")).lower() in ("1", "true"),
        )
    except (ValueError, DomainError) as exc:
        raise ApiError("invalid_input", f"invalid bbox: {exc}") from exc


def parse_sources(value: str | None) -> set[Source] | None:
    if not value:
        return None
    try:
        return {Source(v) for v in value.split(",") if v}
    except ValueError as exc:
        raise ApiError("invalid_input", f"unknown source: {exc}") from exc


def parse_types(value: str | None) -> set[ObjectType] | None:
    if not value:
        return None
    try:
        return {ObjectType(v) for v in value.split(",") if v}
    except ValueError as exc:
        raise ApiError("invalid_input", f"unknown object type: {exc}") from exc
