"""Output adapters: cache, security, telemetry."""

from __future__ import annotations

import time
from pathlib import Path

from ... import stores


class TtlCacheAdapter:
    """In-process TTL cache; TTL 0 disables caching entirely."""

    def __init__(self, ttl_s: float = 30.0, clock=time.monotonic):
        self.ttl_s = ttl_s
        self._clock = clock
        self._entries: dict[str, tuple[float, object]] = {}
        self.hits = 0
        self.misses = 0

    def get(self, key: str):
        if self.ttl_s <= 0:
            return None
        entry = self._entries.get(key)
        if entry is None:
            self.misses += 1
            return None
        stamp, value = entry
        if self._clock() - stamp > self.ttl_s:
            del self._entries[key]
            self.misses += 1
            return None
        self.hits += 1
        return value

    def put(self, key: str, value) -> None:
        if self.ttl_s <= 0:
            return
        self._entries[key] = (self._clock(), value)


class NullCacheAdapter:
    def get(self, key: str):
        return None

    def put(self, key: str, value) -> None:
        pass


class BearerTokenSecurityAdapter:
    """Static bearer-token check; pass-through when no token configured."""

    def __init__(self, expected_token: str | None):
        self.expected_token = expected_token

    def check(self, token: str | None) -> bool:
        if self.expected_token is None:
            return True
        return token == self.expected_token


class StoreTelemetryAdapter:
    """Telemetry port writing to the telemetry store; failures never propagate."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.dropped = 0

    def record(self, event: dict) -> None:
        try:
            with stores.open_store(self.root, "telemetry", "append") as handle:
                stores.append(handle, [event])
        except Exception:
            self.dropped += 1
