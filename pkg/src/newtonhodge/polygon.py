"""Convex polygons with unit horizontal segments.

A polygon is stored as its slope multiset: a tuple of ``(slope, multiplicity)``
pairs, strictly increasing in slope.  The graph starts at the origin, so the
vertices are the prefix sums of the sorted slope sequence.

All arithmetic is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Sequence


class PolygonError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point slopes are not accepted")
    return Fraction(x)


@dataclass(frozen=True)
class ConvexPolygon:
    """Slope multiset of a convex polygon starting at the origin.

    ``segments`` must be strictly increasing in slope with positive
    multiplicities; use :meth:`from_slopes` to build one from an unsorted
    list of slopes.
    """

    segments: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        segs = tuple((_as_fraction(s), int(m)) for s, m in self.segments)
        for _, m in segs:
            if m < 1:
                raise PolygonError("multiplicities must be positive")
        for (a, _), (b, _) in zip(segs, segs[1:]):
            if not a < b:
                raise PolygonError("slopes must be strictly increasing")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_slopes(cls, slopes: Iterable) -> "ConvexPolygon":
        counts = Counter(_as_fraction(s) for s in slopes)
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def from_counts(cls, counts: dict) -> "ConvexPolygon":
        merged: Counter = Counter()
        for s, m in counts.items():
            if m:
                merged[_as_fraction(s)] += m
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def empty(cls) -> "ConvexPolygon":
        return cls(())

    def __len__(self) -> int:
        return sum(m for _, m in self.segments)

    @property
    def length(self) -> int:
        return len(self)

    def slope_list(self) -> list[Fraction]:
        """Slopes repeated by multiplicity, in increasing order."""
        return [s for s, m in self.segments for _ in range(m)]

    def counts(self) -> dict[Fraction, int]:
        return dict(self.segments)

    def vertices(self) -> list[tuple[int, Fraction]]:
        ys = accumulate(self.slope_list(), initial=Fraction(0))
        return list(enumerate(ys))

    def ordinates(self) -> list[Fraction]:
        return [y for _, y in self.vertices()]

    def endpoint(self) -> tuple[int, Fraction]:
        return self.vertices()[-1]

    def total(self) -> Fraction:
        return sum((s * m for s, m in self.segments), Fraction(0))

    # -- algebra ---------------------------------------------------------

    def __mul__(self, other: "ConvexPolygon") -> "ConvexPolygon":
        return product(self, other)

    def __or__(self, other: "ConvexPolygon") -> "ConvexPolygon":
        return juxtapose(self, other)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "slopes": [[str(s), m] for s, m in self.segments],
            "vertices": [[x, str(y)] for x, y in self.vertices()],
        }

    @classmethod
    def from_json(cls, obj) -> "ConvexPolygon":
        if isinstance(obj, dict):
            obj = obj["slopes"]
        return cls(tuple((Fraction(s), int(m)) for s, m in obj))

    def __str__(self) -> str:
        parts = []
        for s, m in self.segments:
            parts.append(str(s) if m == 1 else f"{s}x{m}")
        return "{" + ", ".join(parts) + "}"


def product(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    """Polygon whose slopes are all pairwise sums ``s + t``."""
    out: Counter = Counter()
    for s, m in a.segments:
        for t, n in b.segments:
            out[s + t] += m * n
    return ConvexPolygon.from_counts(out)


def juxtapose(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    """Multiset union of the slopes of ``a`` and ``b``."""
    out = Counter(a.counts())
    out.update(b.counts())
    return ConvexPolygon.from_counts(out)


def juxtapose_all(polys: Iterable[ConvexPolygon]) -> ConvexPolygon:
    out: Counter = Counter()
    for p in polys:
        out.update(p.counts())
    return ConvexPolygon.from_counts(out)


def product_all(polys: Iterable[ConvexPolygon]) -> ConvexPolygon:
    acc = ConvexPolygon(((Fraction(0), 1),))
    for p in polys:
        acc = product(acc, p)
    return acc


def _check_lengths(polys: Sequence[ConvexPolygon]) -> int:
    lengths = {len(p) for p in polys}
    if len(lengths) > 1:
        raise PolygonError("unequal polygon lengths")
    return lengths.pop()


def average(polys: Sequence[ConvexPolygon]) -> ConvexPolygon:
    """Segment-wise mean: the k-th slope of the result is the mean of the
    k-th slopes of the operands."""
    if not polys:
        raise PolygonError("average of an empty list")
    length = _check_lengths(polys)
    columns = [p.slope_list() for p in polys]
    n = len(polys)
    return ConvexPolygon.from_slopes(
        sum((col[k] for col in columns), Fraction(0)) / n for k in range(length)
    )


def dominates(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """True when ``a`` lies on or above ``b`` and both share the endpoint."""
    _check_lengths([a, b])
    ya, yb = a.ordinates(), b.ordinates()
    return ya[-1] == yb[-1] and all(x >= y for x, y in zip(ya, yb))


def max_deviation(a: ConvexPolygon, b: ConvexPolygon) -> Fraction:
    _check_lengths([a, b])
    return max(abs(x - y) for x, y in zip(a.ordinates(), b.ordinates()))


def vertices(a: ConvexPolygon) -> list[tuple[int, Fraction]]:
    return a.vertices()


def lower_hull(points: Iterable[tuple[int, Fraction]]) -> ConvexPolygon:
    """Lower convex hull of points with integer abscissae, as a polygon.

    The leftmost point must be at abscissa 0; the polygon runs to the
    rightmost point.
    """
    pts = sorted((int(x), _as_fraction(y)) for x, y in points)
    if not pts:
        raise PolygonError("no points")
    if pts[0][0] != 0:
        raise PolygonError("hull must start at abscissa 0")
    # keep the lowest ordinate per abscissa
    best: dict[int, Fraction] = {}
    for x, y in pts:
        if x not in best or y < best[x]:
            best[x] = y
    pts = sorted(best.items())

    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)

    counts: Counter = Counter()
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        counts[(y2 - y1) / (x2 - x1)] += x2 - x1
    return ConvexPolygon.from_counts(counts)


def is_convex_sequence(ys: Sequence[Fraction]) -> bool:
    """Whether the points ``(i, ys[i])`` have nondecreasing successive slopes."""
    diffs = [b - a for a, b in zip(ys, ys[1:])]
    return all(s <= t for s, t in zip(diffs, diffs[1:]))
