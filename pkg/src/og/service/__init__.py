"""API prediction service: hexagonal core, ports, adapters."""

from .app import build_app, build_ports, serve
from .conf import ApiConfig
from .core import ApiError, CoreServices, PortSet

__all__ = ["ApiConfig", "ApiError", "CoreServices", "PortSet", "build_app", "build_ports", "serve"]
