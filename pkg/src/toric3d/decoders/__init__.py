from .boundary import BoundaryDecoder, decode_with_boundaries, explore_boundary, peel
from .core import DecodeOutcome, DecodeStatus, Exploration, InternalError
from .periodic import (
    ArtificialBoundary,
    PeriodicDecoder,
    ResidualEstimationError,
    build_artificial_boundary,
    cubic_plane_links,
    decode_periodic,
    estimate_residual_cubic,
    estimate_residual_general,
    explore_periodic,
    explore_residual_general,
    peel_project,
    reduce_representatives,
)

__all__ = [
    "ArtificialBoundary",
    "BoundaryDecoder",
    "DecodeOutcome",
    "DecodeStatus",
    "Exploration",
    "InternalError",
    "PeriodicDecoder",
    "ResidualEstimationError",
    "build_artificial_boundary",
    "cubic_plane_links",
    "decode_periodic",
    "decode_with_boundaries",
    "estimate_residual_cubic",
    "estimate_residual_general",
    "explore_boundary",
    "explore_periodic",
    "explore_residual_general",
    "peel",
    "peel_project",
    "reduce_representatives",
]
