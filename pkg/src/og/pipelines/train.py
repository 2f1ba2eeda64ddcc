"""Rule-based and ML-based training pipelines."""

from __future__ import annotations

import math
import time

from .. import stores
from ..contracts import MODEL_CONTRACT, fnv1a_64
from .features import FEATURE_NAMES, gaps_s, implied_speeds, iter_windows, window_features
from .models import (
    DEFAULT_GAP_THRESHOLD_S,
    DEFAULT_JUMP_SPEED_KN,
    DEFAULT_MAX_SPEED_KN,
    DEFAULT_ZONES,
    MlModel,
    RuleModel,
    score_fix_window,
)

CALIBRATION_QUANTILE = 0.995
CALIBRATION_MARGIN = 1.5
MIN_ML_NORMAL_FIXES = 100


class TrainingError(Exception):
    pass


class InsufficientDataError(TrainingError):
    pass


def nearest_rank_quantile(values: list[float], q: float) -> float:
    """Nearest-rank quantile: the ceil(q*N)-th order statistic."""
    if not values:
        raise ValueError("quantile of empty sample")
    if not (0.0 < q <= 1.0):
        raise ValueError("q must be in (0, 1]")
    ordered = sorted(values)
    rank = max(1, math.ceil(q * len(ordered)))
    return ordered[rank - 1]


def _group_tracks(fixes: list[dict]) -> dict[str, list[dict]]:
    grouped: dict[str, list[dict]] = {}
    for rec in fixes:
        grouped.setdefault(rec["object_id"], []).append(rec)
    for recs in grouped.values():
        recs.sort(key=lambda r: r["timestamp"])
    return grouped


def _anomalous_windows(labels: list[dict]) -> dict[str, list[tuple[int, int]]]:
    out: dict[str, list[tuple[int, int]]] = {}
    for lb in labels:
        if lb.get("verdict") == "anomalous":
            out.setdefault(lb["object_id"], []).append((int(lb["start_ts"]), int(lb["end_ts"])))
    return out


def _is_normal(rec: dict, windows: dict[str, list[tuple[int, int]]]) -> bool:
    for a, b in windows.get(rec["object_id"], ()):
        if a <= rec["timestamp"] <= b:
            return False
    return True


def normal_stretches(fixes: list[dict], labels: list[dict]) -> list[list[dict]]:
    """Per-object contiguous runs of fixes outside every anomalous label window."""
    windows = _anomalous_windows(labels)
    stretches = []
    for _object_id, track in sorted(_group_tracks(fixes).items()):
        run: list[dict] = []
        for rec in track:
            if _is_normal(rec, windows):
                run.append(rec)
            elif run:
                stretches.append(run)
                run = []
        if run:
            stretches.append(run)
    return stretches


def _window_overlaps_label(window: list[dict],
                           windows: dict[str, list[tuple[int, int]]]) -> bool:
    start, end = window[0]["timestamp"], window[-1]["timestamp"]
    object_id = window[0]["object_id"]
    return any(a <= end and start <= b for a, b in windows.get(object_id, ()))


def evaluate_model(model, fixes: list[dict], labels: list[dict]) -> dict:
    """Window-overlap precision/recall of a model against a labeled snapshot."""
    anomalous = _anomalous_windows(labels)
    predicted: dict[str, list[tuple[int, int]]] = {}
    n_windows = fired_windows = 0
    normal_fired = normal_total = 0
    for object_id, track in sorted(_group_tracks(fixes).items()):
        for window in iter_windows(track):
            n_windows += 1
            result = score_fix_window(model, window)
            overlaps = _window_overlaps_label(window, anomalous)
            if not overlaps:
                normal_total += 1
                if result.fired:
                    normal_fired += 1
            if result.fired:
                fired_windows += 1
                predicted.setdefault(object_id, []).append(
                    (window[0]["timestamp"], window[-1]["timestamp"])
                )
    tp = fp = 0
    for object_id, spans in predicted.items():
        for start, end in spans:
            if any(a <= end and start <= b for a, b in anomalous.get(object_id, ())):
                tp += 1
            else:
                fp += 1
    injected = [(oid, a, b) for oid, spans in anomalous.items() for a, b in spans]
    recovered = sum(
        1
        for oid, a, b in injected
        if any(s <= b and a <= e for s, e in predicted.get(oid, ()))
    )
    return {
        "train_precision": tp / (tp + fp) if (tp + fp) else 1.0,
        "train_recall": recovered / len(injected) if injected else 1.0,
        "fired_windows": fired_windows,
        "total_windows": n_windows,
        "normal_fp_rate": normal_fired / normal_total if normal_total else 0.0,
    }


def _record_run(root, pipeline: str, snapshot_id: str, hyperparams: dict,
                metrics: dict, started: int, ended: int) -> str:
    run_id = f"{pipeline}-{fnv1a_64((snapshot_id + stores.dumps_record(hyperparams)).encode())[:10]}"
    record = {
        "run_id": run_id,
        "pipeline": pipeline,
        "data_snapshot_id": snapshot_id,
        "started_ts": started,
        "ended_ts": max(ended, started),
        "hyperparameters": hyperparams,
        "metrics": metrics,
    }
    with stores.open_store(root, "metadata", "append") as handle:
        stores.append(handle, [record])
    return run_id


def _manifest(name: str, kind: str, hyperparams: dict) -> dict:
    return {
        "name": name,
        "kind": kind,
        "contract_name": MODEL_CONTRACT.name,
        "contract_version": MODEL_CONTRACT.version,
        "file_format": MODEL_CONTRACT.file_format,
        "features": [{"name": n, "type": t} for n, t in MODEL_CONTRACT.input_features],
        "hyperparameters": hyperparams,
    }


def train_rule(root, snapshot_id: str, hyperparams: dict | None = None) -> str:
    """Fit (or accept) rule thresholds and register a rule model."""
    started = int(time.time())
    hyperparams = dict(hyperparams or {})
    fixes, labels, _ = stores.read_snapshot(root, snapshot_id)
    stretches = normal_stretches(fixes, labels)
    normal_count = sum(len(s) for s in stretches)
    if normal_count == 0:
        raise InsufficientDataError("snapshot has no normal-labeled fixes to calibrate against")

    calibrate = set(hyperparams.pop("calibrate", ()))
    quantities = {
        "max_speed_kn": lambda: [v for s in stretches for v in implied_speeds(s)],
        "jump_speed_kn": lambda: [v for s in stretches for v in implied_speeds(s)],
        "gap_threshold_s": lambda: [v for s in stretches for v in gaps_s(s)],
    }
    defaults = {
        "max_speed_kn": DEFAULT_MAX_SPEED_KN,
        "gap_threshold_s": DEFAULT_GAP_THRESHOLD_S,
        "jump_speed_kn": DEFAULT_JUMP_SPEED_KN,
    }
    thresholds = {}
    for key, default in defaults.items():
        if key in hyperparams:
            thresholds[key] = float(hyperparams[key])
        elif key in calibrate:
            sample = quantities[key]()
            if not sample:
                raise InsufficientDataError(f"no normal data to calibrate {key}")
            thresholds[key] = CALIBRATION_MARGIN * nearest_rank_quantile(
                sample, CALIBRATION_QUANTILE
            )
        else:
            thresholds[key] = default
    zones = tuple(hyperparams.get("zones", DEFAULT_ZONES))
    model = RuleModel(zones=zones, **thresholds)
    metrics = evaluate_model(model, fixes, labels)
    run_hyperparams = {**thresholds, "zones": [dict(z) for z in zones]}
    run_id = _record_run(root, "rule", snapshot_id, run_hyperparams, metrics,
                         started, int(time.time()))
    return stores.register_model(
        root,
        manifest=_manifest("rule-detector", "rule", thresholds),
        params=model.to_params(),
        lineage={"training_run_id": run_id, "data_snapshot_id": snapshot_id},
    )


def train_ml(root, snapshot_id: str, hyperparams: dict | None = None) -> str:
    """Fit the robust z-score detector on normal windows and register it."""
    started = int(time.time())
    hyperparams = dict(hyperparams or {})
    quantile_q = float(hyperparams.get("quantile_q", 0.99))
    fixes, labels, _ = stores.read_snapshot(root, snapshot_id)
    stretches = normal_stretches(fixes, labels)
    normal_count = sum(len(s) for s in stretches)
    if normal_count < MIN_ML_NORMAL_FIXES:
        raise InsufficientDataError(
            f"{normal_count} normal-labeled fixes; need >= {MIN_ML_NORMAL_FIXES}"
        )
    vectors = [window_features(w) for s in stretches for w in iter_windows(s)]
    if not vectors:
        raise InsufficientDataError("no scorable windows in normal data")

    centers: dict[str, float] = {}
    scales: dict[str, float] = {}
    dropped = []
    for name in FEATURE_NAMES:
        column = sorted(v[name] for v in vectors)
        median = column[(len(column) - 1) // 2]
        mad = sorted(abs(x - median) for x in column)[(len(column) - 1) // 2]
        scale = mad * 1.4826
        if scale <= 0:
            dropped.append(name)
            continue
        centers[name] = median
        scales[name] = scale
    if not scales:
        raise TrainingError("all features degenerate (zero spread); cannot train")

    scores = [
        sum(abs(v[n] - centers[n]) / scales[n] for n in scales)
        for v in vectors
    ]
    threshold = nearest_rank_quantile(scores, quantile_q)
    model = MlModel(centers=centers, scales=scales, score_threshold=threshold,
                    quantile_q=quantile_q)
    metrics = evaluate_model(model, fixes, labels)
    metrics.update({
        "n_training_windows": len(vectors),
        "score_threshold": threshold,
        "dropped_features": dropped,
    })
    run_id = _record_run(root, "ml", snapshot_id, {"quantile_q": quantile_q},
                         metrics, started, int(time.time()))
    return stores.register_model(
        root,
        manifest=_manifest("ml-detector", "ml", {"quantile_q": quantile_q}),
        params=model.to_params(),
        lineage={"training_run_id": run_id, "data_snapshot_id": snapshot_id},
    )
