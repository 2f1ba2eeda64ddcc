"""Kinematic features derived from consecutive fixes.

Kinematics are computed from positions; reported speed over ground is a
feature only, never trusted for detection thresholds.
"""

from __future__ import annotations

import math

from ..domain import KM_PER_NM, haversine_km

FEATURE_NAMES = ("implied_speed_kn", "turn_rate_deg_per_min", "reported_sog_kn")

WINDOW_SIZE = 10
WINDOW_STRIDE = 5

# below this speed, position noise dominates and course over ground is undefined
MIN_SPEED_FOR_TURN_KN = 1.0


def implied_speeds(fixes: list[dict]) -> list[float]:
    """Implied speed in knots between consecutive fixes (len n-1)."""
    out = []
    for a, b in zip(fixes, fixes[1:]):
        dt_h = (b["timestamp"] - a["timestamp"]) / 3600.0
        if dt_h <= 0:
            out.append(0.0)
            continue
        km = haversine_km((a["lat"], a["lon"]), (b["lat"], b["lon"]))
        out.append(km / dt_h / KM_PER_NM)
    return out


def bearing_deg(a: dict, b: dict) -> float:
    """Initial great-circle bearing from a to b, degrees in [0, 360)."""
    p1 = math.radians(a["lat"])
    p2 = math.radians(b["lat"])
    dlam = math.radians(b["lon"] - a["lon"])
    y = math.sin(dlam) * math.cos(p2)
    x = math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dlam)
    return math.degrees(math.atan2(y, x)) % 360.0


def turn_rates(fixes: list[dict]) -> list[float]:
    """Course change in degrees per minute at each interior fix (len n-2).

    Zero when either adjacent segment moves slower than MIN_SPEED_FOR_TURN_KN:
    a bearing between two near-identical positions is pure noise.
    """
    speeds = implied_speeds(fixes)
    out = []
    for i in range(1, len(fixes) - 1):
        if speeds[i - 1] < MIN_SPEED_FOR_TURN_KN or speeds[i] < MIN_SPEED_FOR_TURN_KN:
            out.append(0.0)
            continue
        b1 = bearing_deg(fixes[i - 1], fixes[i])
        b2 = bearing_deg(fixes[i], fixes[i + 1])
        diff = (b2 - b1 + 180.0) % 360.0 - 180.0
        dt_min = (fixes[i + 1]["timestamp"] - fixes[i - 1]["timestamp"]) / 2.0 / 60.0
        out.append(diff / dt_min if dt_min > 0 else 0.0)
    return out


def gaps_s(fixes: list[dict]) -> list[float]:
    return [float(b["timestamp"] - a["timestamp"]) for a, b in zip(fixes, fixes[1:])]


def window_features(fixes: list[dict]) -> dict[str, float]:
    """One feature vector per window: worst-case kinematics inside it."""
    speeds = implied_speeds(fixes)
    turns = turn_rates(fixes)
    sogs = [f["sog"] for f in fixes if f.get("sog") is not None]
    return {
        "implied_speed_kn": max(speeds) if speeds else 0.0,
        "turn_rate_deg_per_min": max((abs(t) for t in turns), default=0.0),
        # fall back to implied speed when no fix in the window reports sog
        "reported_sog_kn": max(sogs) if sogs else (max(speeds) if speeds else 0.0),
    }


def iter_windows(fixes: list[dict], size: int = WINDOW_SIZE,
                 stride: int = WINDOW_STRIDE) -> list[list[dict]]:
    """Sliding windows covering the whole track, including a tail window."""
    n = len(fixes)
    if n < 2:
        return []
    if n <= size:
        return [fixes]
    starts = list(range(0, n - size + 1, stride))
    if starts[-1] != n - size:
        starts.append(n - size)
    return [fixes[s:s + size] for s in starts]
