"""Synthetic data generation: simulated traffic with window-accurate anomaly injection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import stores
from ..contracts import fnv1a_64
from ..ingestion import Label
from ..simulate import FIX_PERIOD_S, KM_PER_DEG, SimTrack, make_tracks
from .models import DEFAULT_GAP_THRESHOLD_S, DEFAULT_ZONES

DEFAULT_RATES = {
    "excessive_speed": 0.3,
    "ais_gap": 0.3,
    "impossible_jump": 0.3,
    "zone_violation": 0.3,
}

EXCURSION_SPEED_KN = 50.0
EXCURSION_LEN_FIXES = 20
ZONE_DWELL_FIXES = 30
JUMP_OFFSET_DEG = -2.0  # longitude shift of the teleport


class SynthConfigError(ValueError):
    pass


@dataclass
class SynthResult:
    snapshot_id: str
    n_fixes: int
    labels: list[Label]


def _window_fractions(duration_s: int, gap_threshold_s: float) -> dict[str, float]:
    n = duration_s / FIX_PERIOD_S + 1
    gap_fixes = math.ceil(1.2 * gap_threshold_s / FIX_PERIOD_S)
    return {
        "excessive_speed": EXCURSION_LEN_FIXES / n,
        "ais_gap": gap_fixes / n,
        "impossible_jump": 2 / n,
        "zone_violation": (ZONE_DWELL_FIXES + 2) / n,
    }


def _free_segment(rng: np.random.Generator, n: int, length: int,
                  used: list[tuple[int, int]], margin: int = 12) -> int | None:
    """Pick a start index whose [start, start+length) avoids used intervals."""
    lo, hi = margin, n - length - margin
    if hi <= lo:
        return None
    for _ in range(100):
        start = int(rng.integers(lo, hi))
        span = (start - margin, start + length + margin)
        if all(span[1] <= a or span[0] >= b for a, b in used):
            used.append(span)
            return start
    return None


def _inject_excursion(track: SimTrack, start: int) -> None:
    """Fast run along the current course; the rest of the track shifts with it."""
    end = start + EXCURSION_LEN_FIXES
    step_km = EXCURSION_SPEED_KN * 1.852 / 60.0
    lat, lon = float(track.lat[start]), float(track.lon[start])
    base_bearing = math.atan2(
        float(track.lon[start + 1] - track.lon[start]) * math.cos(math.radians(lat)),
        float(track.lat[start + 1] - track.lat[start]),
    )
    for k in range(start + 1, end):
        lat += step_km * math.cos(base_bearing) / KM_PER_DEG
        lon += step_km * math.sin(base_bearing) / (KM_PER_DEG * math.cos(math.radians(lat)))
        track.lat[k] = lat
        track.lon[k] = lon
        track.sog[k] = EXCURSION_SPEED_KN
    # shift the remainder so the track continues from the excursion end
    shift_lat = lat - float(track.lat[end])
    shift_lon = lon - float(track.lon[end])
    track.lat[end:] += shift_lat
    track.lon[end:] += shift_lon


def _inject_jump(track: SimTrack, at: int) -> None:
    track.lon[at:] += JUMP_OFFSET_DEG


def _inject_zone(track: SimTrack, start: int, zone: dict) -> None:
    end = start + ZONE_DWELL_FIXES
    zone_lat = (zone["min_lat"] + zone["max_lat"]) / 2.0
    zone_lon = (zone["min_lon"] + zone["max_lon"]) / 2.0
    mid = (start + end) // 2
    dlat = zone_lat - float(track.lat[mid])
    dlon = zone_lon - float(track.lon[mid])
    track.lat[start:end] += dlat
    track.lon[start:end] += dlon


def synth_generate(root, seed: int, n_objects: int, duration_s: int,
                   anomaly_rates: dict[str, float] | None = None,
                   gap_threshold_s: float = DEFAULT_GAP_THRESHOLD_S) -> SynthResult:
    """Generate a labeled synthetic snapshot, deterministic for a fixed seed."""
    rates = dict(DEFAULT_RATES)
    if anomaly_rates is not None:
        rates.update(anomaly_rates)
    for kind, rate in rates.items():
        if not (0.0 <= rate <= 1.0):
            raise SynthConfigError(f"rate for {kind} must be in [0, 1], got {rate}")
    fractions = _window_fractions(duration_s, gap_threshold_s)
    consumed = sum(frac for kind, frac in fractions.items() if rates.get(kind, 0.0) > 0)
    if consumed > 0.5:
        raise SynthConfigError(
            f"injection windows would consume {consumed:.2f} of each track (> 0.5); "
            "lower the rates or lengthen the tracks"
        )

    tracks = make_tracks(seed, n_objects, duration_s, id_prefix="syn")
    rng = np.random.default_rng(seed + 1)  # injection stream, separate from track stream
    gap_fixes = math.ceil(1.2 * gap_threshold_s / FIX_PERIOD_S)
    zone = dict(DEFAULT_ZONES[0])

    labels: list[Label] = []
    all_fixes: list[dict] = []
    for track in tracks:
        n = len(track.ts)
        moving = track.object_type != "structure"
        used: list[tuple[int, int]] = []
        deleted: set[int] = set()
        anomalous: list[Label] = []

        def want(kind: str) -> bool:
            return moving and rng.random() < rates.get(kind, 0.0)

        if want("ais_gap"):
            start = _free_segment(rng, n, gap_fixes, used)
            if start is not None:
                deleted.update(range(start, start + gap_fixes))
                anomalous.append(Label(
                    object_id=track.object_id,
                    start_ts=int(track.ts[start]),
                    end_ts=int(track.ts[start + gap_fixes - 1]),
                    verdict="anomalous", kind="ais_gap", annotator="provider",
                ))
        if want("excessive_speed"):
            start = _free_segment(rng, n, EXCURSION_LEN_FIXES, used)
            if start is not None:
                _inject_excursion(track, start)
                anomalous.append(Label(
                    object_id=track.object_id,
                    start_ts=int(track.ts[start]),
                    end_ts=int(track.ts[start + EXCURSION_LEN_FIXES - 1]),
                    verdict="anomalous", kind="excessive_speed", annotator="provider",
                ))
        if want("impossible_jump"):
            at = _free_segment(rng, n, 2, used)
            if at is not None:
                _inject_jump(track, at)
                anomalous.append(Label(
                    object_id=track.object_id,
                    start_ts=int(track.ts[at - 1]),
                    end_ts=int(track.ts[at]),
                    verdict="anomalous", kind="impossible_jump", annotator="provider",
                ))
        if want("zone_violation"):
            start = _free_segment(rng, n, ZONE_DWELL_FIXES, used)
            if start is not None:
                _inject_zone(track, start, zone)
                # window covers the boundary teleports on both sides
                anomalous.append(Label(
                    object_id=track.object_id,
                    start_ts=int(track.ts[start - 1]),
                    end_ts=int(track.ts[start + ZONE_DWELL_FIXES]),
                    verdict="anomalous", kind="zone_violation", annotator="provider",
                ))

        labels.append(Label(
            object_id=track.object_id,
            start_ts=int(track.ts[0]),
            end_ts=int(track.ts[-1]),
            verdict="normal", annotator="provider",
        ))
        labels.extend(anomalous)
        records = track.to_records(source="synthetic")
        all_fixes.extend(r for i, r in enumerate(records) if i not in deleted)

    label_records = [lb.to_record() for lb in labels]
    content = "".join(stores.dumps_record(r) + "\n" for r in all_fixes)
    snapshot_id = "synth-" + fnv1a_64(content.encode("utf-8"))[:12]
    stores.write_snapshot(
        root, snapshot_id, all_fixes, label_records,
        manifest={
            "parent": None,
            "pipeline": "synthetic",
            "seed": seed,
            "params": {
                "n_objects": n_objects,
                "duration_s": duration_s,
                "anomaly_rates": rates,
                "gap_threshold_s": gap_threshold_s,
            },
        },
    )
    return SynthResult(snapshot_id=snapshot_id, n_fixes=len(all_fixes), labels=labels)
