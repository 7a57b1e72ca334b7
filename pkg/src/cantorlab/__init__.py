"""Finite bounded-degree graphs: ball statistics, symmetry-breaking labelings,
local oracles, almost-finite partitions and Laplacian spectra."""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.1.0"

from .graph import (  # noqa: E402
    UNREACHABLE,
    Graph,
    GraphError,
    PreconditionError,
    VertexSet,
    ball,
    boundary,
    build_graph,
    diameter,
    distance,
    doubling_constant,
    iso_constant,
)
from .generators import generate  # noqa: E402

__all__ = [
    "UNREACHABLE",
    "Graph",
    "GraphError",
    "PreconditionError",
    "VertexSet",
    "ball",
    "boundary",
    "build_graph",
    "diameter",
    "distance",
    "doubling_constant",
    "generate",
    "iso_constant",
    "__version__",
]
