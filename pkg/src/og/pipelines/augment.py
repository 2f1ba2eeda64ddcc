"""Data augmentation: position jitter and regular-grid resampling of snapshots."""

from __future__ import annotations

import numpy as np

from .. import stores
from ..contracts import fnv1a_64

JITTER_CLIP_SIGMA = 5.9  # keep every jittered point strictly inside 6 sigma


def _group_by_object(fixes: list[dict]) -> dict[str, list[dict]]:
    grouped: dict[str, list[dict]] = {}
    for rec in fixes:
        grouped.setdefault(rec["object_id"], []).append(rec)
    for recs in grouped.values():
        recs.sort(key=lambda r: r["timestamp"])
    return grouped


def _resample_track(fixes: list[dict], period_s: int) -> list[dict]:
    if len(fixes) < 2:
        return list(fixes)
    ts = np.array([f["timestamp"] for f in fixes], dtype=np.float64)
    grid = np.arange(ts[0], ts[-1] + 1, period_s, dtype=np.float64)
    out = []
    template = fixes[0]
    lat = np.interp(grid, ts, [f["lat"] for f in fixes])
    lon = np.interp(grid, ts, [f["lon"] for f in fixes])
    sogs = [f.get("sog") for f in fixes]
    cogs = [f.get("cog") for f in fixes]
    has_sog = all(s is not None for s in sogs)
    has_cog = all(c is not None for c in cogs)
    sog = np.interp(grid, ts, sogs) if has_sog else None
    cog = np.interp(grid, ts, cogs) if has_cog else None
    for i, t in enumerate(grid):
        rec = {
            "object_id": template["object_id"],
            "lat": round(float(lat[i]), 6),
            "lon": round(float(lon[i]), 6),
            "timestamp": int(t),
            "source": template["source"],
            "object_type": template["object_type"],
        }
        if sog is not None:
            rec["sog"] = round(float(sog[i]), 2)
        if cog is not None:
            rec["cog"] = round(float(cog[i]), 2)
        out.append(rec)
    return out


def augment(root, snapshot_id: str, jitter_sigma_deg: float = 0.0,
            resample_period_s: int | None = None, seed: int = 0) -> str:
    """Produce a derived snapshot; labels carry over unchanged, provenance in the manifest."""
    fixes, labels, _manifest = stores.read_snapshot(root, snapshot_id)
    rng = np.random.default_rng(seed)
    grouped = _group_by_object(fixes)
    out_fixes: list[dict] = []
    for object_id in sorted(grouped):
        track = grouped[object_id]
        if resample_period_s:
            track = _resample_track(track, resample_period_s)
        if jitter_sigma_deg > 0:
            clip = JITTER_CLIP_SIGMA * jitter_sigma_deg
            noise = rng.normal(0.0, jitter_sigma_deg, size=(len(track), 2))
            noise = np.clip(noise, -clip, clip)
            track = [
                {**rec,
                 "lat": round(min(max(rec["lat"] + float(noise[i, 0]), -90.0), 90.0), 6),
                 "lon": round(min(max(rec["lon"] + float(noise[i, 1]), -180.0), 179.999999), 6)}
                for i, rec in enumerate(track)
            ]
        out_fixes.extend(track)
    content = "".join(stores.dumps_record(r) + "\n" for r in out_fixes)
    new_id = "aug-" + fnv1a_64(content.encode("utf-8"))[:12]
    stores.write_snapshot(
        root, new_id, out_fixes, labels,
        manifest={
            "parent": snapshot_id,
            "pipeline": "augment",
            "seed": seed,
            "params": {
                "jitter_sigma_deg": jitter_sigma_deg,
                "resample_period_s": resample_period_s,
            },
        },
    )
    return new_id
