"""Wiring: construct the port set from adapters and build the application."""

from __future__ import annotations

from .adapters import (
    BearerTokenSecurityAdapter,
    EnvConfigAdapter,
    FileRepositoryAdapter,
    FixtureThirdPartyAdapter,
    NullCacheAdapter,
    RegistryModelAdapter,
    SnapshotStorageAdapter,
    StoreTelemetryAdapter,
    TtlCacheAdapter,
    create_app,
)
from .conf import ApiConfig
from .core import CoreServices, PortSet


def build_ports(config: ApiConfig, use_cache: bool = True) -> PortSet:
    root = config.data_dir
    return PortSet(
        repository=FileRepositoryAdapter(root),
        model=RegistryModelAdapter(root),
        storage=SnapshotStorageAdapter(root),
        config=EnvConfigAdapter(config),
        security=BearerTokenSecurityAdapter(config.auth_token),
        telemetry=StoreTelemetryAdapter(root),
        cache=TtlCacheAdapter(config.cache_ttl_s) if use_cache else NullCacheAdapter(),
        third_party=FixtureThirdPartyAdapter(),
    )


def build_app(config: ApiConfig | None = None, use_cache: bool = True):
    config = config or ApiConfig.from_env()
    core = CoreServices(build_ports(config, use_cache=use_cache))
    return create_app(core)


def serve(config: ApiConfig | None = None):  # pragma: no cover - thin uvicorn shim
    import uvicorn

    config = config or ApiConfig.from_env()
    uvicorn.run(build_app(config), host="127.0.0.1", port=config.port)
