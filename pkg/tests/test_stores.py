"""Append-only JSONL stores, snapshots, model registry, telemetry durability."""

import json

import pytest
from hypothesis import given, strategies as st

from og import stores
from og.contracts import MODEL_CONTRACT, checksum_file
from og.domain import AreaOfInterest, GeoFix, filter_fixes


def fix_record(i=0, oid="v-1", lat=40.0, lon=-10.0):
    return {
        "object_id": oid,
        "lat": lat,
        "lon": lon,
        "timestamp": 1_700_000_000 + 60 * i,
        "source": "sensor",
        "object_type": "vessel",
        "sog": 10.0,
        "cog": 90.0,
    }


def label_record(i=0):
    return {
        "object_id": "v-1",
        "start_ts": 1_700_000_000 + i,
        "end_ts": 1_700_003_600 + i,
        "verdict": "normal",
        "annotator": "provider",
    }


def prediction_record(i=0):
    return {
        "anomaly_id": f"an-{i:04d}",
        "object_id": "v-1",
        "kind": "excessive_speed",
        "severity": 1.0,
        "start_ts": 1_700_000_000,
        "end_ts": 1_700_000_600,
        "lat": 40.0,
        "lon": -10.0,
        "model_id": "rule-detector:1",
    }


def telemetry_record(i=0):
    return {"ts": 1_700_000_000 + i, "endpoint": "/api/v1/health", "latency_ms": 1.5, "status": 200}


def metadata_record(i=0):
    return {
        "run_id": f"run-{i}",
        "pipeline": "rule",
        "data_snapshot_id": "snap-1",
        "started_ts": 1_700_000_000,
        "ended_ts": 1_700_000_100,
    }


RECORD_MAKERS = {
    "raw": fix_record,
    "labels": label_record,
    "predictions": prediction_record,
    "telemetry": telemetry_record,
    "metadata": metadata_record,
}


def manifest_for(name="rule-detector"):
    return {
        "name": name,
        "kind": "rule",
        "contract_name": MODEL_CONTRACT.name,
        "contract_version": MODEL_CONTRACT.version,
        "file_format": MODEL_CONTRACT.file_format,
        "features": [{"name": n, "type": t} for n, t in MODEL_CONTRACT.input_features],
        "hyperparameters": {},
    }


PARAMS = {"kind": "rule", "max_speed_kn": 30.0, "gap_threshold_s": 21600,
          "jump_speed_kn": 100.0, "zones": []}
LINEAGE = {"training_run_id": "run-1", "data_snapshot_id": "snap-1"}


class TestAppendScan:
    @pytest.mark.parametrize("kind", sorted(RECORD_MAKERS))
    def test_round_trip_every_jsonl_store(self, tmp_path, kind):
        records = [RECORD_MAKERS[kind](i) for i in range(5)]
        with stores.open_store(tmp_path, kind, "append") as handle:
            assert stores.append(handle, records) == 5
        got = stores.scan(stores.open_store(tmp_path, kind, "read"))
        assert got.records == records
        assert got.skipped == 0

    def test_snapshot_round_trip(self, tmp_path):
        fixes = [fix_record(i) for i in range(3)]
        labels = [label_record()]
        stores.write_snapshot(tmp_path, "snap-a", fixes, labels,
                              {"parent": None, "pipeline": "synth", "seed": 1, "params": {}})
        got_fixes, got_labels, manifest = stores.read_snapshot(tmp_path, "snap-a")
        assert got_fixes == fixes
        assert got_labels == labels
        assert manifest["record_count"] == 3
        assert manifest["checksum"] == checksum_file(tmp_path / "data" / "snap-a" / "train.jsonl")

    def test_registry_round_trip(self, tmp_path):
        model_id = stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        entry = stores.resolve_model(tmp_path, "rule-detector")
        assert entry.model_id == model_id
        assert entry.params == PARAMS

    def test_atomic_batch_one_invalid_rejects_all(self, tmp_path):
        bad = fix_record(4)
        bad["lat"] = 95.0
        with stores.open_store(tmp_path, "raw", "append") as handle:
            with pytest.raises(stores.ContractViolationError):
                stores.append(handle, [fix_record(i) for i in range(4)] + [bad])
        assert len(stores.scan(stores.open_store(tmp_path, "raw", "read"))) == 0

    def test_second_writer_busy(self, tmp_path):
        with stores.open_store(tmp_path, "raw", "append"):
            with pytest.raises(stores.BusyError):
                stores.open_store(tmp_path, "raw", "append")

    def test_stale_lock_breakable_only_with_flag(self, tmp_path):
        lock = tmp_path / "raw.lock"
        lock.parent.mkdir(parents=True, exist_ok=True)
        lock.write_text(json.dumps({"pid": 99999, "acquired_ts": 1.0}))
        with pytest.raises(stores.BusyError):
            stores.open_store(tmp_path, "raw", "append")
        with stores.open_store(tmp_path, "raw", "append", break_stale=True) as handle:
            stores.append(handle, [fix_record()])

    def test_fresh_lock_never_broken(self, tmp_path):
        import time

        lock = tmp_path / "raw.lock"
        lock.parent.mkdir(parents=True, exist_ok=True)
        lock.write_text(json.dumps({"pid": 99999, "acquired_ts": time.time()}))
        with pytest.raises(stores.BusyError):
            stores.open_store(tmp_path, "raw", "append", break_stale=True)

    def test_truncated_final_line_skipped_never_misparsed(self, tmp_path):
        with stores.open_store(tmp_path, "raw", "append") as handle:
            stores.append(handle, [fix_record(i) for i in range(3)])
        path = tmp_path / "raw.jsonl"
        whole = path.read_text()
        path.write_text(whole + stores.dumps_record(fix_record(9))[:-7])
        got = stores.scan(stores.open_store(tmp_path, "raw", "read"))
        assert got.records == [fix_record(i) for i in range(3)]
        assert got.skipped == 1

    def test_corrupt_middle_line_skipped(self, tmp_path):
        path = tmp_path / "raw.jsonl"
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [stores.dumps_record(fix_record(0)), "{not json}",
                 stores.dumps_record(fix_record(1))]
        path.write_text("\n".join(lines) + "\n")
        got = stores.scan(stores.open_store(tmp_path, "raw", "read"))
        assert len(got.records) == 2
        assert got.skipped == 1

    def test_object_id_absent_empty(self, tmp_path):
        with stores.open_store(tmp_path, "raw", "append") as handle:
            stores.append(handle, [fix_record()])
        got = stores.scan(stores.open_store(tmp_path, "raw", "read"), object_id="ghost")
        assert got.records == []

    def test_aoi_scan_equals_brute_force_filter(self, tmp_path):
        records = [fix_record(i, lat=30.0 + i * 5.0) for i in range(8)]
        with stores.open_store(tmp_path, "raw", "append") as handle:
            stores.append(handle, records)
        aoi = AreaOfInterest(min_lat=35.0, max_lat=50.0, min_lon=-20.0, max_lon=0.0)
        got = stores.scan(stores.open_store(tmp_path, "raw", "read"), aoi=aoi).records
        oracle = [
            r for r in records
            if filter_fixes([GeoFix.from_record(r)], aoi)
        ]
        assert got == oracle

    @given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=25,
                    unique=True))
    def test_telemetry_round_trip_property(self, tmp_path_factory, offsets):
        root = tmp_path_factory.mktemp("telemetry")
        records = [telemetry_record(i) for i in offsets]
        with stores.open_store(root, "telemetry", "append") as handle:
            stores.append(handle, records)
        assert stores.scan(stores.open_store(root, "telemetry", "read")).records == records


class TestRegistry:
    def test_versions_start_at_one_and_are_gapless(self, tmp_path):
        ids = [stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
               for _ in range(3)]
        assert ids == ["rule-detector:1", "rule-detector:2", "rule-detector:3"]

    def test_latest_resolves_highest_version(self, tmp_path):
        for _ in range(3):
            stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        assert stores.resolve_model(tmp_path, "rule-detector", "latest").version == 3

    def test_explicit_version(self, tmp_path):
        for _ in range(3):
            stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        assert stores.resolve_model(tmp_path, "rule-detector", 2).version == 2

    def test_unknown_name_not_found(self, tmp_path):
        with pytest.raises(stores.NotFoundError):
            stores.resolve_model(tmp_path, "ghost-detector")

    def test_missing_version_not_found(self, tmp_path):
        stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        with pytest.raises(stores.NotFoundError):
            stores.resolve_model(tmp_path, "rule-detector", 7)

    def test_tampered_registration_rolls_back(self, tmp_path, monkeypatch):
        real = stores.checksum_file
        calls = {"n": 0}

        def lying_checksum(path):
            calls["n"] += 1
            if calls["n"] == 2:  # the verification pass sees a different file
                return "0" * 16
            return real(path)

        monkeypatch.setattr(stores, "checksum_file", lying_checksum)
        with pytest.raises(stores.IntegrityError):
            stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        monkeypatch.setattr(stores, "checksum_file", real)
        assert stores.list_models(tmp_path) == []
        # the failed attempt leaves no gap
        assert stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE) == "rule-detector:1"

    def test_corrupted_params_detected_on_resolve(self, tmp_path):
        stores.register_model(tmp_path, manifest_for(), PARAMS, LINEAGE)
        params_path = tmp_path / "registry" / "rule-detector" / "1" / "params.json"
        params_path.write_text('{"kind":"rule","max_speed_kn":9999}')
        with pytest.raises(stores.IntegrityError):
            stores.resolve_model(tmp_path, "rule-detector")

    def test_lineage_required(self, tmp_path):
        with pytest.raises(stores.StoreError):
            stores.register_model(tmp_path, manifest_for(), PARAMS, {"training_run_id": "r"})


class TestTelemetry:
    def test_valid_event_appended(self, tmp_path):
        with stores.open_store(tmp_path, "telemetry", "append") as handle:
            stores.record_telemetry(handle, telemetry_record())
            assert handle.dropped_events == 0
        assert len(stores.scan(stores.open_store(tmp_path, "telemetry", "read"))) == 1

    def test_unwritable_store_drops_event_without_raising(self, tmp_path):
        with stores.open_store(tmp_path, "telemetry", "append") as handle:
            handle.path.mkdir()  # make the target path unopenable as a file
            stores.record_telemetry(handle, telemetry_record())
            assert handle.dropped_events == 1

    def test_100_events_in_order(self, tmp_path):
        events = [telemetry_record(i) for i in range(100)]
        with stores.open_store(tmp_path, "telemetry", "append") as handle:
            for e in events:
                stores.record_telemetry(handle, e)
        assert stores.scan(stores.open_store(tmp_path, "telemetry", "read")).records == events


class TestSnapshots:
    def test_contract_enforced_on_write(self, tmp_path):
        bad = fix_record()
        bad["lon"] = -999.0
        with pytest.raises(stores.ContractViolationError):
            stores.write_snapshot(tmp_path, "snap-bad", [bad], [], {"pipeline": "synth"})
        assert stores.list_snapshots(tmp_path) == []

    def test_unknown_snapshot_not_found(self, tmp_path):
        with pytest.raises(stores.NotFoundError):
            stores.read_snapshot(tmp_path, "snap-ghost")

    def test_list_snapshots_sorted(self, tmp_path):
        for sid in ("snap-b", "snap-a"):
            stores.write_snapshot(tmp_path, sid, [fix_record()], [], {"pipeline": "synth"})
        assert stores.list_snapshots(tmp_path) == ["snap-a", "snap-b"]
