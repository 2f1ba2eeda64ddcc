"""Geodesy, kinematics, and trajectory assembly against independent oracles."""

import math

import pytest
from hypothesis import given, strategies as st

from og.domain import (
    AnomalyKind,
    AreaOfInterest,
    DomainError,
    Explanation,
    ExplanationStep,
    GeoFix,
    ObjectType,
    Source,
    Anomaly,
    Trajectory,
    assemble_trajectory,
    filter_fixes,
    haversine_km,
    implied_speed_knots,
    point_in_aoi,
)

EARTH_RADIUS_KM = 6371.0088


def oracle_great_circle_km(a, b):
    """Independent central-angle formula (dot product of unit vectors)."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    cos_angle = (
        math.sin(lat1) * math.sin(lat2)
        + math.cos(lat1) * math.cos(lat2) * math.cos(lon2 - lon1)
    )
    return EARTH_RADIUS_KM * math.acos(max(-1.0, min(1.0, cos_angle)))


def fix(ts=1_700_000_000, lat=40.0, lon=-10.0, oid="v-1", **kw):
    return GeoFix(object_id=oid, lat=lat, lon=lon, timestamp=ts, **kw)


latitudes = st.floats(min_value=-90.0, max_value=90.0, allow_nan=False)
longitudes = st.floats(min_value=-180.0, max_value=179.999999, allow_nan=False)
points = st.tuples(latitudes, longitudes)


class TestHaversine:
    def test_identical_points_zero(self):
        assert haversine_km((0.0, 0.0), (0.0, 0.0)) == 0.0

    def test_one_degree_of_longitude_at_equator(self):
        assert haversine_km((0.0, 0.0), (0.0, 1.0)) == pytest.approx(111.195, abs=0.001)

    def test_matches_independent_oracle_on_1000_random_pairs(self):
        import numpy as np

        rng = np.random.default_rng(7)
        for _ in range(1000):
            a = (rng.uniform(-90, 90), rng.uniform(-180, 180 - 1e-6))
            b = (rng.uniform(-90, 90), rng.uniform(-180, 180 - 1e-6))
            assert haversine_km(a, b) == pytest.approx(
                oracle_great_circle_km(a, b), abs=1e-3
            )

    @given(points, points)
    def test_symmetry(self, a, b):
        assert haversine_km(a, b) == pytest.approx(haversine_km(b, a), abs=1e-9)

    @given(points, points, points)
    def test_triangle_inequality(self, a, b, c):
        assert haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-6

    @given(points, points)
    def test_nonnegative_and_bounded_by_half_circumference(self, a, b):
        d = haversine_km(a, b)
        assert 0.0 <= d <= math.pi * EARTH_RADIUS_KM + 1e-9

    def test_rejects_out_of_range_latitude(self):
        with pytest.raises(DomainError):
            haversine_km((95.0, 0.0), (0.0, 0.0))


class TestImpliedSpeed:
    def test_one_degree_in_one_hour(self):
        f1 = fix(ts=1_700_000_000, lat=0.0, lon=0.0)
        f2 = fix(ts=1_700_003_600, lat=0.0, lon=1.0)
        assert implied_speed_knots(f1, f2) == pytest.approx(60.04, abs=0.01)

    def test_same_position_any_dt_is_zero(self):
        f1 = fix(ts=1_700_000_000)
        f2 = fix(ts=1_700_000_077)
        assert implied_speed_knots(f1, f2) == 0.0

    def test_degenerate_interval_rejected(self):
        f1 = fix(ts=1_700_000_000)
        with pytest.raises(DomainError):
            implied_speed_knots(f1, fix(ts=1_700_000_000, lat=41.0))


class TestGeoFix:
    def test_subsecond_timestamps_truncate(self):
        assert fix(ts=1_700_000_000.9).timestamp == 1_700_000_000

    @pytest.mark.parametrize(
        "kw", [{"lat": 91.0}, {"lon": 180.0}, {"ts": 0}, {"sog": -1.0}, {"cog": 360.0}]
    )
    def test_invariant_violations_rejected(self, kw):
        with pytest.raises(DomainError):
            fix(**kw)

    def test_record_round_trip(self):
        f = fix(sog=10.5, cog=182.25, source=Source.SENSOR, object_type=ObjectType.VESSEL)
        assert GeoFix.from_record(f.to_record()) == f


class TestAssembleTrajectory:
    def test_empty(self):
        assert assemble_trajectory([], "v-1").fixes == ()

    def test_reverse_order_sorted_ascending(self):
        fs = [fix(ts=1_700_000_000 + 60 * i, lat=40.0 + i * 0.01) for i in (2, 1, 0)]
        traj = assemble_trajectory(fs, "v-1")
        assert [f.timestamp for f in traj.fixes] == sorted(f.timestamp for f in fs)

    def test_duplicate_triple_deduplicated(self):
        a = fix(ts=1_700_000_000)
        b = fix(ts=1_700_000_000)
        c = fix(ts=1_700_000_060, lat=40.01)
        assert len(assemble_trajectory([a, b, c], "v-1").fixes) == 2

    def test_same_timestamp_conflict_resolved_by_source_order(self):
        a = fix(ts=1_700_000_000, lat=40.0, source=Source.SENSOR)
        b = fix(ts=1_700_000_000, lat=41.0, source=Source.PROVIDER)
        traj = assemble_trajectory([a, b], "v-1")
        assert len(traj.fixes) == 1
        assert traj.fixes[0].source is Source.PROVIDER

    def test_foreign_object_id_rejected(self):
        with pytest.raises(DomainError):
            assemble_trajectory([fix(oid="v-2")], "v-1")

    @given(st.lists(st.integers(min_value=1, max_value=10_000), max_size=30))
    def test_always_strictly_increasing(self, ts_list):
        fs = [fix(ts=t, lat=(t % 90) / 2.0) for t in ts_list]
        traj = assemble_trajectory(fs, "v-1")
        assert all(a.timestamp < b.timestamp for a, b in zip(traj.fixes, traj.fixes[1:]))

    @given(st.lists(st.integers(min_value=1, max_value=10_000), max_size=30))
    def test_idempotent(self, ts_list):
        fs = [fix(ts=t, lat=(t % 90) / 2.0) for t in ts_list]
        once = assemble_trajectory(fs, "v-1")
        twice = assemble_trajectory(list(once.fixes), "v-1")
        assert once == twice


class TestPointInAoi:
    AOI = AreaOfInterest(min_lat=30.0, max_lat=45.0, min_lon=-20.0, max_lon=-5.0)

    def test_min_lat_edge_inclusive(self):
        assert point_in_aoi(30.0, -10.0, None, self.AOI)

    def test_just_outside_max_lon(self):
        assert not point_in_aoi(40.0, -4.999999, None, self.AOI)

    def test_antimeridian_wrap(self):
        wrapped = AreaOfInterest(
            min_lat=-10.0, max_lat=10.0, min_lon=170.0, max_lon=-170.0, wrap=True
        )
        assert point_in_aoi(0.0, 179.9, None, wrapped)
        assert point_in_aoi(0.0, -175.0, None, wrapped)
        assert not point_in_aoi(0.0, 0.0, None, wrapped)

    def test_wrap_agrees_with_normalization_oracle(self):
        wrapped = AreaOfInterest(
            min_lat=-90.0, max_lat=90.0, min_lon=150.0, max_lon=-150.0, wrap=True
        )
        for lon in (-179.0, -150.0, -149.0, 0.0, 149.0, 150.0, 179.0):
            oracle = 150.0 <= (lon if lon >= 0 else lon + 360.0) <= 210.0
            assert point_in_aoi(0.0, lon, None, wrapped) == oracle

    def test_unwrapped_inverted_lon_rejected(self):
        with pytest.raises(DomainError):
            AreaOfInterest(min_lat=0.0, max_lat=1.0, min_lon=10.0, max_lon=-10.0)


class TestFilterFixes:
    def test_globe_no_filters_is_identity(self):
        fs = [fix(ts=1_700_000_000 + i, lat=float(i)) for i in range(5)]
        assert filter_fixes(fs, AreaOfInterest.globe()) == fs

    def test_future_from_ts_empties(self):
        fs = [fix()]
        assert filter_fixes(fs, AreaOfInterest.globe(from_ts=9_999_999_999)) == []

    def test_source_filter_equals_brute_force_scan(self):
        fs = [
            fix(ts=1_700_000_000 + i, source=s)
            for i, s in enumerate([Source.SENSOR, Source.CRAWLER, Source.SENSOR])
        ]
        got = filter_fixes(fs, AreaOfInterest.globe(), sources={Source.SENSOR})
        assert got == [f for f in fs if f.source is Source.SENSOR]

    @given(st.lists(st.tuples(latitudes, longitudes), max_size=20))
    def test_idempotent(self, pts):
        fs = [fix(ts=1_700_000_000 + i, lat=lat, lon=lon) for i, (lat, lon) in enumerate(pts)]
        aoi = AreaOfInterest(min_lat=-45.0, max_lat=45.0, min_lon=-90.0, max_lon=90.0)
        once = filter_fixes(fs, aoi)
        assert filter_fixes(once, aoi) == once


class TestAnomalyInvariants:
    def make_expl(self, fired=True):
        return Explanation(
            steps=(ExplanationStep("max_speed_kn", 45.0, 30.0, 1.0, fired),),
            summary="observed 45.0 kn against a 30.0 kn ceiling",
        )

    def make(self, **kw):
        base = dict(
            anomaly_id="an-1",
            object_id="v-1",
            kind=AnomalyKind.EXCESSIVE_SPEED,
            severity=1.0,
            start_ts=1_700_000_000,
            end_ts=1_700_000_600,
            lat=40.0,
            lon=-10.0,
            model_id="rule-detector:1",
            explanation=self.make_expl(),
        )
        base.update(kw)
        return Anomaly(**base)

    def test_valid_anomaly_round_trips(self):
        a = self.make()
        assert Anomaly.from_record(a.to_record()) == a

    def test_inverted_window_rejected(self):
        with pytest.raises(DomainError):
            self.make(start_ts=2, end_ts=1)

    def test_severity_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            self.make(severity=1.5)

    def test_explanation_without_fired_step_rejected(self):
        with pytest.raises(DomainError):
            self.make(explanation=self.make_expl(fired=False))


class TestTrajectory:
    def test_non_increasing_rejected(self):
        a = fix(ts=2)
        b = fix(ts=2, lat=41.0)
        with pytest.raises(DomainError):
            Trajectory(object_id="v-1", fixes=(a, b))
