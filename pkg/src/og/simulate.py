"""Deterministic waypoint-following vessel track simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import KM_PER_NM

KM_PER_DEG = 111.1949266  # (pi/180) * 6371.0088
FIX_PERIOD_S = 60

# sailing region for simulated traffic (Bay of Biscay-ish box)
REGION = {"min_lat": 34.0, "max_lat": 44.0, "min_lon": -19.0, "max_lon": -6.0}

POSITION_NOISE_DEG = 2e-5
SOG_NOISE_KN = 0.2
MIN_SPEED_KN = 5.0
MAX_SPEED_KN = 15.0
# vessels turn gradually: heading changes are rate-limited per fix period
MAX_TURN_RATE_DEG_PER_MIN = 4.0


@dataclass
class SimTrack:
    object_id: str
    object_type: str  # vessel | structure | unidentified
    metadata: dict
    # parallel arrays, one entry per fix
    ts: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    sog: np.ndarray
    cog: np.ndarray

    def to_records(self, source: str) -> list[dict]:
        out = []
        for i in range(len(self.ts)):
            out.append(
                {
                    "object_id": self.object_id,
                    "lat": round(float(self.lat[i]), 6),
                    "lon": round(float(self.lon[i]), 6),
                    "timestamp": int(self.ts[i]),
                    "source": source,
                    "object_type": self.object_type,
                    "sog": round(float(self.sog[i]), 2),
                    "cog": round(float(self.cog[i]), 2),
                }
            )
        return out


def _object_type(index: int) -> str:
    if index % 10 == 8:
        return "structure"
    if index % 10 == 9:
        return "unidentified"
    return "vessel"


def _random_point(rng: np.random.Generator) -> tuple[float, float]:
    lat = rng.uniform(REGION["min_lat"] + 0.5, REGION["max_lat"] - 0.5)
    lon = rng.uniform(REGION["min_lon"] + 0.5, REGION["max_lon"] - 0.5)
    return lat, lon


def make_tracks(
    seed: int,
    n_objects: int,
    duration_s: int,
    start_ts: int = 1_700_000_000,
    id_prefix: str = "obj",
) -> list[SimTrack]:
    """Simulate n_objects tracks at one fix per 60 s, inclusive endpoints."""
    if n_objects < 1:
        raise ValueError("n_objects must be >= 1")
    rng = np.random.default_rng(seed)
    n_fixes = duration_s // FIX_PERIOD_S + 1
    tracks = []
    for i in range(n_objects):
        object_id = f"{id_prefix}-{i:03d}"
        otype = _object_type(i)
        lat0, lon0 = _random_point(rng)
        ts = start_ts + np.arange(n_fixes, dtype=np.int64) * FIX_PERIOD_S
        lats = np.empty(n_fixes)
        lons = np.empty(n_fixes)
        sogs = np.empty(n_fixes)
        cogs = np.empty(n_fixes)
        if otype == "structure":
            lats[:] = lat0 + rng.normal(0, POSITION_NOISE_DEG, n_fixes)
            lons[:] = lon0 + rng.normal(0, POSITION_NOISE_DEG, n_fixes)
            sogs[:] = 0.0
            cogs[:] = 0.0
        else:
            cruise = rng.uniform(MIN_SPEED_KN, MAX_SPEED_KN)
            waypoints = [_random_point(rng) for _ in range(int(rng.integers(3, 7)))]
            wp_idx = 0
            lat, lon = lat0, lon0
            heading = None
            max_turn = MAX_TURN_RATE_DEG_PER_MIN * FIX_PERIOD_S / 60.0
            for k in range(n_fixes):
                wlat, wlon = waypoints[wp_idx]
                dlat_km = (wlat - lat) * KM_PER_DEG
                dlon_km = (wlon - lon) * KM_PER_DEG * math.cos(math.radians(lat))
                dist_km = math.hypot(dlat_km, dlon_km)
                if dist_km < 1.0:
                    wp_idx = (wp_idx + 1) % len(waypoints)
                    wlat, wlon = waypoints[wp_idx]
                    dlat_km = (wlat - lat) * KM_PER_DEG
                    dlon_km = (wlon - lon) * KM_PER_DEG * math.cos(math.radians(lat))
                desired = math.degrees(math.atan2(dlon_km, dlat_km))
                if heading is None:
                    heading = desired
                else:
                    delta = (desired - heading + 180.0) % 360.0 - 180.0
                    heading += min(max(delta, -max_turn), max_turn)
                bearing = math.radians(heading)
                step_km = cruise * KM_PER_NM / 60.0  # distance per fix period
                lats[k] = lat + rng.normal(0, POSITION_NOISE_DEG)
                lons[k] = lon + rng.normal(0, POSITION_NOISE_DEG)
                sogs[k] = max(0.0, cruise + rng.normal(0, SOG_NOISE_KN))
                cogs[k] = heading % 360.0
                lat += step_km * math.cos(bearing) / KM_PER_DEG
                lon += step_km * math.sin(bearing) / (KM_PER_DEG * math.cos(math.radians(lat)))
                lat = min(max(lat, REGION["min_lat"]), REGION["max_lat"])
                lon = min(max(lon, REGION["min_lon"]), REGION["max_lon"])
        tracks.append(
            SimTrack(
                object_id=object_id,
                object_type=otype,
                metadata={
                    "name": f"{otype.capitalize()} {i:03d}",
                    "flag": ["PT", "ES", "FR", "NL", "NO"][i % 5],
                    "callsign": f"OG{i:04d}",
                },
                ts=ts,
                lat=lats,
                lon=lons,
                sog=sogs,
                cog=cogs,
            )
        )
    return tracks
