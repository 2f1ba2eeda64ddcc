from .output import (
    BearerTokenSecurityAdapter,
    NullCacheAdapter,
    StoreTelemetryAdapter,
    TtlCacheAdapter,
)
from .reading import (
    EnvConfigAdapter,
    FileRepositoryAdapter,
    FixtureThirdPartyAdapter,
    RegistryModelAdapter,
    SnapshotStorageAdapter,
)
from .web import create_app

__all__ = [
    "BearerTokenSecurityAdapter",
    "EnvConfigAdapter",
    "FileRepositoryAdapter",
    "FixtureThirdPartyAdapter",
    "NullCacheAdapter",
    "RegistryModelAdapter",
    "SnapshotStorageAdapter",
    "StoreTelemetryAdapter",
    "TtlCacheAdapter",
    "create_app",
]
