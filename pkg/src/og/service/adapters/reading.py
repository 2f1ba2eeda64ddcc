"""Reading adapters: repository, model, storage, configuration, third-party API."""

from __future__ import annotations

import json
from pathlib import Path

from ... import stores
from ...contracts import fnv1a_64
from ...pipelines import detect_anomalies
from ..conf import ApiConfig


class FileRepositoryAdapter:
    """Repository port backed by the JSONL stores."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _scan(self, kind: str, **kwargs) -> list[dict]:
        handle = stores.StoreHandle(self.root, kind, mode="read")
        return stores.scan(handle, **kwargs).records

    def all_fixes(self) -> list[dict]:
        return self._scan("raw")

    def fixes_for(self, object_id: str) -> list[dict]:
        return self._scan("raw", object_id=object_id)

    def object_info(self, object_id: str) -> dict | None:
        for rec in reversed(self._scan("objects")):
            if rec.get("object_id") == object_id:
                return rec
        return None

    def anomalies(self) -> list[dict]:
        return self._scan("predictions")

    def anomaly_by_id(self, anomaly_id: str) -> dict | None:
        for rec in self._scan("predictions"):
            if rec.get("anomaly_id") == anomaly_id:
                return rec
        return None

    def append_label(self, record: dict) -> str:
        label_id = "lb-" + fnv1a_64(stores.dumps_record(record).encode("utf-8"))[:12]
        with stores.open_store(self.root, "labels", "append") as handle:
            stores.append(handle, [record])
        return label_id

    def append_anomalies(self, records: list[dict]) -> int:
        with stores.open_store(self.root, "predictions", "append") as handle:
            existing = {r.get("anomaly_id") for r in stores.scan(handle)}
            fresh = [r for r in records if r["anomaly_id"] not in existing]
            if fresh:
                stores.append(handle, fresh)
        return len(fresh)


class RegistryModelAdapter:
    """Model port backed by the model registry and the window scorer."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def resolve(self, name: str, version: int | str = "latest") -> str:
        return stores.resolve_model(self.root, name, version).model_id

    def detect(self, model_id: str, fixes: list[dict]) -> list[dict]:
        name, _, version = model_id.partition(":")
        entry = stores.resolve_model(self.root, name, version or "latest")
        return [a.to_record() for a in detect_anomalies(entry, fixes)]


class SnapshotStorageAdapter:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def list_snapshots(self) -> list[str]:
        return stores.list_snapshots(self.root)

    def read_snapshot(self, snapshot_id: str) -> list[dict]:
        fixes, _labels, _manifest = stores.read_snapshot(self.root, snapshot_id)
        return fixes


class EnvConfigAdapter:
    def __init__(self, config: ApiConfig | None = None):
        self._config = config or ApiConfig.from_env()

    def get(self) -> ApiConfig:
        return self._config


class FixtureThirdPartyAdapter:
    """Third-party API adapter wired to local fixture documents."""

    def __init__(self, fixture_path: str | Path | None = None):
        self.fixture_path = Path(fixture_path) if fixture_path else None

    def fetch_metadata(self, object_id: str) -> dict | None:
        if self.fixture_path is None or not self.fixture_path.is_file():
            return None
        try:
            documents = json.loads(self.fixture_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        for doc in documents if isinstance(documents, list) else []:
            if doc.get("object_id") == object_id:
                return doc
        return None
