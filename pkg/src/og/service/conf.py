"""Service configuration value object."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class ApiConfig:
    port: int = 8080
    data_dir: str = ""
    model_name: str = "rule-detector"
    model_version: int | str = "latest"
    cache_ttl_s: float = 30.0
    auth_token: str | None = None
    explanation_verbosity: str = "full"
    page_limit_max: int = 10000

    def __post_init__(self):
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port {self.port} outside [1, 65535]")
        if self.cache_ttl_s < 0:
            raise ValueError("cache TTL must be >= 0")

    @classmethod
    def from_env(cls, env: dict | None = None) -> "ApiConfig":
        env = dict(os.environ if env is None else env)
        model = env.get("OG_MODEL", "rule-detector")
        name, _, version = model.partition(":")
        return cls(
            port=int(env.get("OG_PORT", 8080)),
            data_dir=env.get("OG_DATA_DIR", ""),
            model_name=name,
            model_version=int(version) if version else "latest",
            auth_token=env.get("OG_TOKEN") or None,
        )
