"""Exact-arithmetic toolkit for G-Li-Yorke chaos on interval and circle G-spaces.

Maps are piecewise linear with rational breakpoints, the acting group is given
by generators, and every distance, image and preimage is computed exactly.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CompositionError,
    DomainError,
    GChaosError,
    InvalidSystemError,
    NotInvertibleError,
    ParseError,
    ResourceCapError,
)
from .group import IDENTITY, GeneratorSet, Rotation  # noqa: E402
from .gspace import CircleSpace, GSystem, IntervalSpace  # noqa: E402
from .plmap import PLMap, from_pieces, identity  # noqa: E402

__all__ = [
    "IDENTITY",
    "CircleSpace",
    "CompositionError",
    "DomainError",
    "GChaosError",
    "GSystem",
    "GeneratorSet",
    "IntervalSpace",
    "InvalidSystemError",
    "NotInvertibleError",
    "PLMap",
    "ParseError",
    "ResourceCapError",
    "Rotation",
    "__version__",
    "from_pieces",
    "identity",
]
