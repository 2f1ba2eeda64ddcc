from .services import (
    ApiError,
    CoreServices,
    PortSet,
    parse_aoi,
    parse_sources,
    parse_types,
)

__all__ = ["ApiError", "CoreServices", "PortSet", "parse_aoi", "parse_sources", "parse_types"]
