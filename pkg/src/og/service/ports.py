"""Ports: the contracts the core depends on, implemented by adapters."""

from __future__ import annotations

from typing import Protocol

from .conf import ApiConfig


class RepositoryPort(Protocol):
    """Fix, object, anomaly, and label persistence queries."""

    def all_fixes(self) -> list[dict]: ...

    def fixes_for(self, object_id: str) -> list[dict]: ...

    def object_info(self, object_id: str) -> dict | None: ...

    def anomalies(self) -> list[dict]: ...

    def anomaly_by_id(self, anomaly_id: str) -> dict | None: ...

    def append_label(self, record: dict) -> str: ...

    def append_anomalies(self, records: list[dict]) -> int: ...


class ModelPort(Protocol):
    """Model resolution and window scoring."""

    def resolve(self, name: str, version: int | str) -> str:
        """Return the concrete model_id, raising if unresolvable."""
        ...

    def detect(self, model_id: str, fixes: list[dict]) -> list[dict]:
        """Run the detector over per-object windows; returns anomaly records."""
        ...


class StoragePort(Protocol):
    """Snapshot access for offline inputs."""

    def list_snapshots(self) -> list[str]: ...

    def read_snapshot(self, snapshot_id: str) -> list[dict]: ...


class ConfigPort(Protocol):
    def get(self) -> ApiConfig: ...


class SecurityPort(Protocol):
    def check(self, token: str | None) -> bool: ...


class TelemetryPort(Protocol):
    def record(self, event: dict) -> None: ...


class CachePort(Protocol):
    def get(self, key: str): ...

    def put(self, key: str, value) -> None: ...


class ThirdPartyPort(Protocol):
    """External provider lookups (fixture-backed in this installation)."""

    def fetch_metadata(self, object_id: str) -> dict | None: ...
