"""Batch and on-demand prediction: window scoring, anomaly merging, prediction store writes."""

from __future__ import annotations

from dataclasses import dataclass

from .. import stores
from ..contracts import MODEL_CONTRACT, fnv1a_64
from ..domain import Anomaly, AnomalyKind, AreaOfInterest, Explanation, filter_fixes, GeoFix
from .features import iter_windows
from .models import model_from_params, score_fix_window


class PredictionError(Exception):
    pass


@dataclass
class _Fired:
    kind: str
    start_ts: int
    end_ts: int
    severity: float
    lat: float
    lon: float
    explanation: Explanation


def _group_tracks(fixes: list[dict]) -> dict[str, list[dict]]:
    grouped: dict[str, list[dict]] = {}
    for rec in fixes:
        grouped.setdefault(rec["object_id"], []).append(rec)
    out = {}
    for object_id in sorted(grouped):
        track = sorted(grouped[object_id], key=lambda r: r["timestamp"])
        seen = set()
        unique = []
        for rec in track:
            key = (rec["timestamp"], rec["lat"], rec["lon"])
            if key in seen:
                continue
            seen.add(key)
            unique.append(rec)
        out[object_id] = unique
    return out


def _merge(fired: list[_Fired]) -> list[_Fired]:
    """Union overlapping windows of the same kind; keep the strongest explanation."""
    fired.sort(key=lambda f: (f.kind, f.start_ts, f.end_ts))
    merged: list[_Fired] = []
    for f in fired:
        last = merged[-1] if merged else None
        if last is not None and last.kind == f.kind and f.start_ts <= last.end_ts:
            last.end_ts = max(last.end_ts, f.end_ts)
            if f.severity > last.severity:
                last.severity = f.severity
                last.lat, last.lon = f.lat, f.lon
                last.explanation = f.explanation
        else:
            merged.append(_Fired(**vars(f)))
    return merged


def detect_anomalies(entry: stores.ModelRegistryEntry, fixes: list[dict]) -> list[Anomaly]:
    """Slide windows over per-object trajectories, returning merged fired anomalies."""
    model = model_from_params(entry.params)
    anomalies: list[Anomaly] = []
    for object_id, track in _group_tracks(fixes).items():
        fired: list[_Fired] = []
        for window in iter_windows(track):
            result = score_fix_window(model, window)
            for finding in result.findings:
                rep = window[finding.fix_index]
                fired.append(_Fired(
                    kind=finding.kind,
                    start_ts=window[0]["timestamp"],
                    end_ts=window[-1]["timestamp"],
                    severity=finding.severity,
                    lat=rep["lat"],
                    lon=rep["lon"],
                    explanation=result.explanation,
                ))
        for f in _merge(fired):
            key = f"{object_id}|{f.kind}|{f.start_ts}|{f.end_ts}|{entry.model_id}"
            anomalies.append(Anomaly(
                anomaly_id="an-" + fnv1a_64(key.encode("utf-8"))[:16],
                object_id=object_id,
                kind=AnomalyKind(f.kind),
                severity=f.severity,
                start_ts=f.start_ts,
                end_ts=f.end_ts,
                lat=f.lat,
                lon=f.lon,
                model_id=entry.model_id,
                explanation=f.explanation,
            ))
    anomalies.sort(key=lambda a: (a.object_id, a.start_ts, a.kind.value))
    return anomalies


def persist_anomalies(root, anomalies: list[Anomaly]) -> int:
    """Append anomalies not already stored; idempotent on anomaly_id."""
    with stores.open_store(root, "predictions", "append") as handle:
        existing = {r.get("anomaly_id") for r in stores.scan(handle)}
        fresh = [a.to_record() for a in anomalies if a.anomaly_id not in existing]
        if fresh:
            stores.append(handle, fresh)
    return len(fresh)


def _check_model_contract(entry: stores.ModelRegistryEntry) -> None:
    manifest = entry.manifest
    if (manifest.get("contract_name") != MODEL_CONTRACT.name
            or manifest.get("contract_version") != MODEL_CONTRACT.version):
        raise PredictionError(
            f"model {entry.model_id} declares contract "
            f"{manifest.get('contract_name')}/{manifest.get('contract_version')}, "
            f"installation expects {MODEL_CONTRACT.name}/{MODEL_CONTRACT.version}"
        )


def measure_against_labels(root, model_id: str, snapshot_id: str) -> dict:
    """Window-overlap recall and precision of stored predictions vs. snapshot labels."""
    _fixes, labels, _manifest = stores.read_snapshot(root, snapshot_id)
    with stores.open_store(root, "predictions", "read") as handle:
        predictions = [r for r in stores.scan(handle) if r.get("model_id") == model_id]
    injected = [
        (lb["object_id"], lb["kind"], int(lb["start_ts"]), int(lb["end_ts"]))
        for lb in labels
        if lb.get("verdict") == "anomalous"
    ]
    anomalous_by_object: dict[str, list[tuple[int, int]]] = {}
    for object_id, _kind, a, b in injected:
        anomalous_by_object.setdefault(object_id, []).append((a, b))

    kinematic = {"excessive_speed", "impossible_jump"}

    def recovered(object_id: str, a: int, b: int, kind: str | None = None) -> bool:
        for p in predictions:
            if p["object_id"] != object_id:
                continue
            if kind is not None and p["kind"] != kind and not (
                p["kind"] == "kinematic_outlier" and kind in kinematic
            ):
                continue
            if int(p["start_ts"]) <= b and a <= int(p["end_ts"]):
                return True
        return False

    per_kind: dict[str, dict] = {}
    for object_id, kind, a, b in injected:
        stats = per_kind.setdefault(kind, {"injected": 0, "recovered": 0})
        stats["injected"] += 1
        if recovered(object_id, a, b, kind=kind):
            stats["recovered"] += 1
    total = len(injected)
    total_recovered = sum(
        1 for object_id, _k, a, b in injected if recovered(object_id, a, b)
    )
    tp = fp = 0
    for p in predictions:
        spans = anomalous_by_object.get(p["object_id"], ())
        if any(a <= int(p["end_ts"]) and int(p["start_ts"]) <= b for a, b in spans):
            tp += 1
        else:
            fp += 1
    return {
        "model_id": model_id,
        "snapshot_id": snapshot_id,
        "predictions": len(predictions),
        "recall": total_recovered / total if total else 1.0,
        "precision": tp / (tp + fp) if (tp + fp) else 1.0,
        "per_kind": {
            kind: {**stats, "recall": stats["recovered"] / stats["injected"]}
            for kind, stats in sorted(per_kind.items())
        },
    }


def batch_predict(root, model_id: str, snapshot_id: str | None = None,
                  aoi: AreaOfInterest | None = None) -> int:
    """Score a snapshot (or the raw store) and write fired anomalies to the Prediction Store."""
    name, _, version = model_id.partition(":")
    entry = stores.resolve_model(root, name, version or "latest")
    _check_model_contract(entry)
    if snapshot_id is not None:
        fixes, _labels, _manifest = stores.read_snapshot(root, snapshot_id)
    else:
        with stores.open_store(root, "raw", "read") as handle:
            fixes = stores.scan(handle).records
    if aoi is not None:
        geo = [GeoFix.from_record(r) for r in fixes]
        kept = {id(g) for g in filter_fixes(geo, aoi)}
        fixes = [r for g, r in zip(geo, fixes) if id(g) in kept]
    anomalies = detect_anomalies(entry, fixes)
    persist_anomalies(root, anomalies)
    return len(anomalies)
