"""Hodge, Hodge-Stickelberger and generic Newton polygons for direct-sum
Laurent polynomials, with an exponential-sum oracle for small primes."""

from .polygon import ConvexPolygon, PolygonError
from .polytope import DirectSumPolytope, PolytopeError, Segment1D, segment, direct_sum

__version__ = "0.1.0"

__all__ = [
    "ConvexPolygon",
    "PolygonError",
    "DirectSumPolytope",
    "PolytopeError",
    "Segment1D",
    "segment",
    "direct_sum",
]
