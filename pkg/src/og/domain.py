"""Maritime domain entities, value objects, and pure geodesic/kinematic functions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

EARTH_RADIUS_KM = 6371.0088
KM_PER_NM = 1.852


class DomainError(ValueError):
    """Invariant violation on a domain value; names the offending field."""

    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        super().__init__(f"{field_name}: {message}")


class Source(enum.Enum):
    PROVIDER = "provider"
    SENSOR = "sensor"
    CRAWLER = "crawler"
    SYNTHETIC = "synthetic"


class ObjectType(enum.Enum):
    VESSEL = "vessel"
    STRUCTURE = "structure"
    UNIDENTIFIED = "unidentified"


class AnomalyKind(enum.Enum):
    EXCESSIVE_SPEED = "excessive_speed"
    AIS_GAP = "ais_gap"
    IMPOSSIBLE_JUMP = "impossible_jump"
    ZONE_VIOLATION = "zone_violation"
    KINEMATIC_OUTLIER = "kinematic_outlier"


_SOURCE_ORDER = {s: i for i, s in enumerate(Source)}


def _check_lat(lat: float, name: str = "lat") -> None:
    if not (-90.0 <= lat <= 90.0):
        raise DomainError(name, f"latitude {lat} outside [-90, 90]")


def _check_lon(lon: float, name: str = "lon") -> None:
    if not (-180.0 <= lon < 180.0):
        raise DomainError(name, f"longitude {lon} outside [-180, 180)")


@dataclass(frozen=True)
class GeoFix:
    """One timestamped geolocation report for a marine object.

    Timestamps are whole UTC seconds; sub-second inputs are truncated.
    """

    object_id: str
    lat: float
    lon: float
    timestamp: int
    source: Source = Source.PROVIDER
    object_type: ObjectType = ObjectType.UNIDENTIFIED
    sog: float | None = None
    cog: float | None = None

    def __post_init__(self):
        _check_lat(self.lat)
        _check_lon(self.lon)
        object.__setattr__(self, "timestamp", int(self.timestamp))
        if self.timestamp <= 0:
            raise DomainError("timestamp", f"must be > 0, got {self.timestamp}")
        if self.sog is not None and self.sog < 0:
            raise DomainError("sog", f"speed over ground must be >= 0, got {self.sog}")
        if self.cog is not None and not (0.0 <= self.cog < 360.0):
            raise DomainError("cog", f"course over ground {self.cog} outside [0, 360)")

    def to_record(self) -> dict:
        rec = {
            "object_id": self.object_id,
            "lat": self.lat,
            "lon": self.lon,
            "timestamp": self.timestamp,
            "source": self.source.value,
            "object_type": self.object_type.value,
        }
        if self.sog is not None:
            rec["sog"] = self.sog
        if self.cog is not None:
            rec["cog"] = self.cog
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "GeoFix":
        return cls(
            object_id=rec["object_id"],
            lat=float(rec["lat"]),
            lon=float(rec["lon"]),
            timestamp=int(rec["timestamp"]),
            source=Source(rec.get("source", "provider")),
            object_type=ObjectType(rec.get("object_type", "unidentified")),
            sog=float(rec["sog"]) if rec.get("sog") is not None else None,
            cog=float(rec["cog"]) if rec.get("cog") is not None else None,
        )


@dataclass(frozen=True)
class MarineObject:
    object_id: str
    object_type: ObjectType
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Trajectory:
    object_id: str
    fixes: tuple[GeoFix, ...]

    def __post_init__(self):
        for f in self.fixes:
            if f.object_id != self.object_id:
                raise DomainError("fixes", f"fix for {f.object_id!r} in trajectory of {self.object_id!r}")
        for a, b in zip(self.fixes, self.fixes[1:]):
            if a.timestamp >= b.timestamp:
                raise DomainError("fixes", "timestamps must be strictly increasing")


@dataclass(frozen=True)
class AreaOfInterest:
    """Bounding box plus optional time window.

    Longitude bounds may wrap the antimeridian only when `wrap` is set;
    unwrapped boxes must satisfy min_lon <= max_lon.
    """

    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float
    from_ts: int | None = None
    to_ts: int | None = None
    wrap: bool = False

    def __post_init__(self):
        _check_lat(self.min_lat, "min_lat")
        _check_lat(self.max_lat, "max_lat")
        _check_lon(self.min_lon, "min_lon")
        _check_lon(self.max_lon, "max_lon")
        if self.min_lat > self.max_lat:
            raise DomainError("min_lat", "min_lat > max_lat")
        if not self.wrap and self.min_lon > self.max_lon:
            raise DomainError("min_lon", "min_lon > max_lon without wrap flag")
        if self.from_ts is not None and self.to_ts is not None and self.from_ts > self.to_ts:
            raise DomainError("from_ts", "from_ts > to_ts")

    @classmethod
    def globe(cls, from_ts: int | None = None, to_ts: int | None = None) -> "AreaOfInterest":
        return cls(-90.0, 90.0, -180.0, 179.999999, from_ts=from_ts, to_ts=to_ts)


@dataclass(frozen=True)
class ExplanationStep:
    rule_or_feature: str
    observed: float
    threshold_or_baseline: float
    contribution: float
    fired: bool

    def to_record(self) -> dict:
        return {
            "rule_or_feature": self.rule_or_feature,
            "observed": self.observed,
            "threshold_or_baseline": self.threshold_or_baseline,
            "contribution": self.contribution,
            "fired": self.fired,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ExplanationStep":
        return cls(
            rule_or_feature=rec["rule_or_feature"],
            observed=float(rec["observed"]),
            threshold_or_baseline=float(rec["threshold_or_baseline"]),
            contribution=float(rec["contribution"]),
            fired=bool(rec["fired"]),
        )


@dataclass(frozen=True)
class Explanation:
    steps: tuple[ExplanationStep, ...]
    summary: str

    def to_record(self) -> dict:
        return {"steps": [s.to_record() for s in self.steps], "summary": self.summary}

    @classmethod
    def from_record(cls, rec: dict) -> "Explanation":
        return cls(
            steps=tuple(ExplanationStep.from_record(s) for s in rec["steps"]),
            summary=rec["summary"],
        )


@dataclass(frozen=True)
class Anomaly:
    anomaly_id: str
    object_id: str
    kind: AnomalyKind
    severity: float
    start_ts: int
    end_ts: int
    lat: float
    lon: float
    model_id: str
    explanation: Explanation

    def __post_init__(self):
        if self.start_ts > self.end_ts:
            raise DomainError("start_ts", "window start > end")
        if not (0.0 <= self.severity <= 1.0):
            raise DomainError("severity", f"severity {self.severity} outside [0, 1]")
        if not any(s.fired for s in self.explanation.steps):
            raise DomainError("explanation", "no fired step in explanation")

    def to_record(self) -> dict:
        return {
            "anomaly_id": self.anomaly_id,
            "object_id": self.object_id,
            "kind": self.kind.value,
            "severity": self.severity,
            "start_ts": self.start_ts,
            "end_ts": self.end_ts,
            "lat": self.lat,
            "lon": self.lon,
            "model_id": self.model_id,
            "explanation": self.explanation.to_record(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Anomaly":
        return cls(
            anomaly_id=rec["anomaly_id"],
            object_id=rec["object_id"],
            kind=AnomalyKind(rec["kind"]),
            severity=float(rec["severity"]),
            start_ts=int(rec["start_ts"]),
            end_ts=int(rec["end_ts"]),
            lat=float(rec["lat"]),
            lon=float(rec["lon"]),
            model_id=rec["model_id"],
            explanation=Explanation.from_record(rec["explanation"]),
        )


def haversine_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in km on a sphere of mean radius 6371.0088 km."""
    lat1, lon1 = a
    lat2, lon2 = b
    _check_lat(lat1, "a.lat")
    _check_lon(lon1, "a.lon")
    _check_lat(lat2, "b.lat")
    _check_lon(lon2, "b.lon")
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dlam / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def implied_speed_knots(f1: GeoFix, f2: GeoFix) -> float:
    """Speed in knots implied by the displacement between two consecutive fixes."""
    if f2.timestamp <= f1.timestamp:
        raise DomainError("timestamp", "degenerate interval: f1.timestamp must precede f2.timestamp")
    dist_km = haversine_km((f1.lat, f1.lon), (f2.lat, f2.lon))
    hours = (f2.timestamp - f1.timestamp) / 3600.0
    return dist_km / hours / KM_PER_NM


def assemble_trajectory(fixes: list[GeoFix], object_id: str) -> Trajectory:
    """Sort, dedup, and tie-break an unordered pile of fixes into a trajectory."""
    foreign = sorted({f.object_id for f in fixes if f.object_id != object_id})
    if foreign:
        raise DomainError("object_id", f"foreign object ids present: {', '.join(foreign)}")
    seen: set[tuple] = set()
    unique = []
    for f in sorted(fixes, key=lambda f: (f.timestamp, _SOURCE_ORDER[f.source], f.lat, f.lon)):
        key = (f.timestamp, f.lat, f.lon)
        if key in seen:
            continue
        seen.add(key)
        unique.append(f)
    # collapse same-timestamp reports that survived dedup: keep the first by tie-break order
    kept = []
    for f in unique:
        if kept and kept[-1].timestamp == f.timestamp:
            continue
        kept.append(f)
    return Trajectory(object_id=object_id, fixes=tuple(kept))


def point_in_aoi(lat: float, lon: float, ts: int | None, aoi: AreaOfInterest) -> bool:
    """Inclusive spatial and temporal membership test."""
    if not (aoi.min_lat <= lat <= aoi.max_lat):
        return False
    if aoi.wrap:
        # normalize: a wrapped box spans [min_lon, 180) U [-180, max_lon]
        if not (lon >= aoi.min_lon or lon <= aoi.max_lon):
            return False
    else:
        if not (aoi.min_lon <= lon <= aoi.max_lon):
            return False
    if ts is not None:
        if aoi.from_ts is not None and ts < aoi.from_ts:
            return False
        if aoi.to_ts is not None and ts > aoi.to_ts:
            return False
    return True


def filter_fixes(
    fixes: list[GeoFix],
    aoi: AreaOfInterest,
    sources: set[Source] | None = None,
    types: set[ObjectType] | None = None,
) -> list[GeoFix]:
    """Fixes inside the AOI (inclusive bounds) matching the optional source/type filters."""
    out = []
    for f in fixes:
        if not point_in_aoi(f.lat, f.lon, f.timestamp, aoi):
            continue
        if sources is not None and f.source not in sources:
            continue
        if types is not None and f.object_type not in types:
            continue
        out.append(f)
    return out
