"""Dependency-rule enforcement: the service core must not know about adapters.

The core is exercised here entirely through in-memory fakes of every port,
proving it runs with no file stores, no web framework, and no registry.
"""

import ast
from pathlib import Path

import pytest

from og.service import ApiConfig
from og.service.core import ApiError, CoreServices, PortSet, parse_aoi

CORE_DIR = Path(__file__).resolve().parent.parent / "src" / "og" / "service" / "core"

ALLOWED_PREFIXES = (
    "og.domain",
    "og.contracts",
    "og.service.ports",
    "og.service.conf",
    "og.service.core",
)
STDLIB = {
    "base64", "dataclasses", "json", "math", "typing", "enum", "functools",
    "itertools", "collections", "__future__", "abc",
}


def resolved_imports(path: Path):
    """Yield absolute module names imported by a core source file."""
    tree = ast.parse(path.read_text())
    package_parts = ["og", "service", "core"]
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            for alias in node.names:
                yield alias.name
        elif isinstance(node, ast.ImportFrom):
            if node.level == 0:
                yield node.module or ""
            else:
                base = package_parts[: len(package_parts) - node.level + 1]
                yield ".".join(base + ([node.module] if node.module else []))


class TestDependencyRule:
    def test_core_never_imports_adapters_or_frameworks(self):
        offenders = []
        for path in sorted(CORE_DIR.glob("*.py")):
            for module in resolved_imports(path):
                root = module.split(".")[0]
                if root in STDLIB:
                    continue
                if any(module == p or module.startswith(p + ".")
                       for p in ALLOWED_PREFIXES):
                    continue
                offenders.append(f"{path.name}: {module}")
        assert offenders == []

    def test_adapter_modules_exist_outside_core(self):
        adapters = CORE_DIR.parent / "adapters"
        assert adapters.is_dir()
        assert not (CORE_DIR / "adapters").exists()


# ---------------------------------------------------------------------------
# In-memory fakes for every port
# ---------------------------------------------------------------------------


class FakeRepository:
    def __init__(self, fixes=(), objects=None, anomalies=(), labels=None):
        self._fixes = list(fixes)
        self._objects = objects or {}
        self._anomalies = list(anomalies)
        self.labels = labels if labels is not None else []

    def all_fixes(self):
        return list(self._fixes)

    def fixes_for(self, object_id):
        return [f for f in self._fixes if f["object_id"] == object_id]

    def object_info(self, object_id):
        return self._objects.get(object_id)

    def anomalies(self):
        return list(self._anomalies)

    def anomaly_by_id(self, anomaly_id):
        return next((a for a in self._anomalies if a["anomaly_id"] == anomaly_id), None)

    def append_label(self, record):
        self.labels.append(record)
        return f"lb-{len(self.labels):06d}"

    def append_anomalies(self, records):
        known = {a["anomaly_id"] for a in self._anomalies}
        fresh = [r for r in records if r["anomaly_id"] not in known]
        self._anomalies.extend(fresh)
        return len(fresh)


class FakeModel:
    def __init__(self, known=("rule-detector",), detections=()):
        self.known = set(known)
        self.detections = list(detections)
        self.detect_calls = 0

    def resolve(self, name, version):
        if name not in self.known:
            raise LookupError(name)
        return f"{name}:1"

    def detect(self, model_id, fixes):
        self.detect_calls += 1
        return list(self.detections)


class FakeStorage:
    def list_snapshots(self):
        return []

    def read_snapshot(self, snapshot_id):
        raise KeyError(snapshot_id)


class FakeConfig:
    def __init__(self, config):
        self._config = config

    def get(self):
        return self._config


class FakeSecurity:
    def __init__(self, expected=None):
        self.expected = expected

    def check(self, token):
        return self.expected is None or token == self.expected


class FakeTelemetry:
    def __init__(self):
        self.events = []

    def record(self, event):
        self.events.append(event)


class FakeCache:
    def __init__(self):
        self.store = {}

    def get(self, key):
        return self.store.get(key)

    def put(self, key, value):
        self.store[key] = value


def fix(oid, i, lat=40.0, lon=-10.0):
    return {"object_id": oid, "lat": lat, "lon": lon,
            "timestamp": 1_700_000_000 + 60 * i, "source": "sensor",
            "object_type": "vessel", "sog": 10.0, "cog": 90.0}


def anomaly(aid, lat=40.0, lon=-10.0, start=1_700_000_000, end=1_700_000_600):
    return {
        "anomaly_id": aid, "object_id": "v-1", "kind": "excessive_speed",
        "severity": 1.0, "start_ts": start, "end_ts": end, "lat": lat, "lon": lon,
        "model_id": "rule-detector:1",
        "explanation": {"summary": "fast", "steps": [
            {"rule_or_feature": "implied_speed_kn", "observed": 45.0,
             "threshold_or_baseline": 30.0, "contribution": 1.0, "fired": True}]},
    }


@pytest.fixture
def core():
    repository = FakeRepository(
        fixes=[fix("v-1", i) for i in range(5)] + [fix("v-2", i, lat=50.0) for i in range(5)],
        objects={"v-1": {"object_id": "v-1", "object_type": "vessel", "metadata": {}}},
        anomalies=[anomaly("an-0001"), anomaly("an-0002", lat=55.0)],
    )
    ports = PortSet(
        repository=repository,
        model=FakeModel(detections=[anomaly("an-fresh")]),
        storage=FakeStorage(),
        config=FakeConfig(ApiConfig(data_dir="/nowhere")),
        security=FakeSecurity(),
        telemetry=FakeTelemetry(),
        cache=FakeCache(),
        third_party=None,
    )
    return CoreServices(ports)


class TestCoreWithAllAdaptersFaked:
    def test_geolocations_roundtrip(self, core):
        fixes, next_cursor = core.get_geolocations(parse_aoi({}))
        assert len(fixes) == 10
        assert next_cursor is None

    def test_geolocations_paging(self, core):
        page1, cursor = core.get_geolocations(parse_aoi({}), limit=6)
        assert len(page1) == 6 and cursor is not None
        page2, end = core.get_geolocations(parse_aoi({}), cursor=cursor, limit=6)
        assert len(page2) == 4 and end is None
        whole, _ = core.get_geolocations(parse_aoi({}))
        assert page1 + page2 == whole

    def test_object_lookup_and_miss(self, core):
        assert core.get_object("v-1")["object_type"] == "vessel"
        with pytest.raises(ApiError) as exc:
            core.get_object("ghost-without-fixes")
        assert exc.value.kind == "not_found"

    def test_object_falls_back_to_fix_records(self, core):
        info = core.get_object("v-2")
        assert info["object_id"] == "v-2"

    def test_trajectory_sorted(self, core):
        body = core.get_trajectory("v-1")
        ts = [f["timestamp"] for f in body["fixes"]]
        assert ts == sorted(ts)

    def test_anomaly_listing_spatial_filter(self, core):
        aoi = parse_aoi({"bbox": "35,-20,45,0"})
        listed = core.list_anomalies(aoi)
        assert [a["anomaly_id"] for a in listed] == ["an-0001"]

    def test_explanation_passthrough(self, core):
        expl = core.get_explanation("an-0001")
        assert expl["steps"][0]["fired"] is True

    def test_detect_uses_model_port_and_persists(self, core):
        out = core.detect_on_demand("v-1", 1_700_000_000, 1_700_000_600)
        assert [a["anomaly_id"] for a in out] == ["an-fresh"]
        assert core.get_explanation("an-fresh")["summary"] == "fast"

    def test_detect_unresolvable_model(self, core):
        with pytest.raises(ApiError) as exc:
            core.detect_on_demand("v-1", 1_700_000_000, 1_700_000_600,
                                  model_spec="ghost-detector")
        assert exc.value.kind == "model_unavailable"

    def test_label_forced_annotator(self, core):
        label_id = core.post_label({"object_id": "v-1", "start_ts": 1, "end_ts": 2,
                                    "verdict": "normal", "annotator": "spoofed"})
        assert label_id.startswith("lb-")
        assert core.ports.repository.labels[-1]["annotator"] == "investigator"

    def test_health_reports_resolved_model(self, core):
        body = core.health()
        assert body == {"status": "ok", "model_id": "rule-detector:1",
                        "contract": body["contract"]}
        assert body["contract"]["name"] == "api-v1"

    def test_authorization_port_consulted(self):
        ports_kw = dict(
            repository=FakeRepository(), model=FakeModel(), storage=FakeStorage(),
            config=FakeConfig(ApiConfig(data_dir="/nowhere")),
            telemetry=FakeTelemetry(), cache=FakeCache(), third_party=None,
        )
        locked = CoreServices(PortSet(security=FakeSecurity("tok"), **ports_kw))
        with pytest.raises(ApiError) as exc:
            locked.authorize(None)
        assert exc.value.kind == "unauthorized"
        locked.authorize("tok")
