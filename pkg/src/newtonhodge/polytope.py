"""Direct sums of lattice segments and their weight functions.

A :class:`DirectSumPolytope` is the convex hull of ``0`` and the points
``d_i f_i``, ``-d'_i f_i`` where the ``f_i`` are the columns of an integer
matrix ``M`` with nonzero determinant.  In the coordinates ``c = M^{-1} u``
the polytope is the direct sum of the segments ``[-d'_i, d_i]``, so the
weight of a point is a sum of one-variable weights.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm, prod
from typing import Iterable, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Segment1D:
    d: int
    dp: int

    def __post_init__(self):
        if self.d < 0 or self.dp < 0:
            raise PolytopeError("segment bounds must be nonnegative")
        if self.d == 0 and self.dp == 0:
            raise PolytopeError("degenerate segment (d, dp) = (0, 0)")

    @property
    def length(self) -> int:
        return self.d + self.dp

    def weight(self, c: Fraction) -> Fraction | None:
        """One-variable weight ``max(c/d, -c/dp)``; ``None`` off the cone."""
        if c > 0:
            return None if self.d == 0 else Fraction(c) / self.d
        if c < 0:
            return None if self.dp == 0 else Fraction(-c) / self.dp
        return Fraction(0)


Twist = tuple  # tuple[Fraction, ...], each entry in [0, 1)


def make_twist(values: Iterable, n: int | None = None) -> tuple[Fraction, ...]:
    """Parse a twist vector; entries are reduced into ``[0, 1)``."""
    out = []
    for v in values:
        f = Fraction(v) if not isinstance(v, Fraction) else v
        out.append(f - (f.numerator // f.denominator))
    if n is not None and len(out) != n:
        raise PolytopeError(f"twist has {len(out)} entries, expected {n}")
    return tuple(out)


def zero_twist(n: int) -> tuple[Fraction, ...]:
    return (Fraction(0),) * n


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def det(m: Sequence[Sequence[int]]) -> int:
    return int(Matrix(m).det())


def solve(m: Sequence[Sequence[int]], u: Sequence) -> list[Fraction]:
    """Exact solution of ``m c = u`` by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(u[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise PolytopeError("singular basis matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def matvec(m: Sequence[Sequence[int]], v: Sequence) -> list:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


@dataclass(frozen=True)
class DirectSumPolytope:
    """``hull(0, d_i f_i, -d'_i f_i)`` with ``f_i`` the columns of ``basis``."""

    basis: tuple[tuple[int, ...], ...]
    segments: tuple[Segment1D, ...]

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in row) for row in self.basis)
        segs = tuple(
            s if isinstance(s, Segment1D) else Segment1D(*s) for s in self.segments
        )
        n = len(segs)
        if n == 0:
            raise PolytopeError("polytope must have dimension at least 1")
        if len(basis) != n or any(len(row) != n for row in basis):
            raise PolytopeError("basis must be an n x n matrix")
        if det(basis) == 0:
            raise PolytopeError("basis matrix is singular")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_segments(cls, segments, basis=None) -> "DirectSumPolytope":
        segs = tuple(s if isinstance(s, Segment1D) else Segment1D(*s) for s in segments)
        n = len(segs)
        if basis is None:
            basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(tuple(map(tuple, basis)), segs)

    @property
    def n(self) -> int:
        return len(self.segments)

    @property
    def is_standard(self) -> bool:
        n = self.n
        return all(self.basis[i][j] == int(i == j) for i in range(n) for j in range(n))

    def standard(self) -> "DirectSumPolytope":
        """Same segments on the identity basis."""
        return DirectSumPolytope.from_segments(self.segments)

    def coordinates(self, u: Sequence) -> list[Fraction]:
        if self.is_standard:
            return [Fraction(x) for x in u]
        return solve(self.basis, u)

    # -- file format -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "basis": [list(row) for row in self.basis],
            "segments": [{"d": s.d, "dp": s.dp} for s in self.segments],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DirectSumPolytope":
        try:
            segs = [Segment1D(int(s["d"]), int(s["dp"])) for s in obj["segments"]]
            n = int(obj.get("n", len(segs)))
            if n != len(segs):
                raise PolytopeError("n does not match the number of segments")
            basis = obj.get("basis")
            return cls.from_segments(segs, basis)
        except (KeyError, TypeError) as exc:
            raise PolytopeError(f"malformed polytope description: {exc}") from exc

    @classmethod
    def load(cls, path) -> "DirectSumPolytope":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def segment(d: int, dp: int = 0) -> DirectSumPolytope:
    """The one-dimensional polytope ``[-dp, d]``."""
    return DirectSumPolytope.from_segments([(d, dp)])


def direct_sum(a: DirectSumPolytope, b: DirectSumPolytope) -> DirectSumPolytope:
    na, nb = a.n, b.n
    basis = [list(row) + [0] * nb for row in a.basis]
    basis += [[0] * na + list(row) for row in b.basis]
    return DirectSumPolytope.from_segments(a.segments + b.segments, basis)


def weight(P: DirectSumPolytope, u: Sequence) -> Fraction | None:
    """``min{rho >= 0 : u in rho P}``, or ``None`` when ``u`` is off the cone."""
    total = Fraction(0)
    for seg, c in zip(P.segments, P.coordinates(u)):
        w = seg.weight(c)
        if w is None:
            return None
        total += w
    return total


def lattice_volume(P: DirectSumPolytope) -> int:
    """Normalized volume ``n! V(P)``."""
    return abs(det(P.basis)) * prod(s.length for s in P.segments)


def fundamental_points(basis: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Integer points of the half-open parallelepiped spanned by the columns."""
    n = len(basis)
    # bounding box of sum(x_i f_i), 0 <= x_i < 1
    lo = [sum(min(0, basis[r][c]) for c in range(n)) for r in range(n)]
    hi = [sum(max(0, basis[r][c]) for c in range(n)) for r in range(n)]
    out = []
    for u in itertools.product(*(range(lo[r], hi[r] + 1) for r in range(n))):
        c = solve(basis, u)
        if all(0 <= x < 1 for x in c):
            out.append(tuple(u))
    if len(out) != abs(det(basis)):
        raise PolytopeError("fundamental domain enumeration is inconsistent")
    return out


def coset_shifts(P: DirectSumPolytope, twist: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Axis offsets of the lattice ``twist + Z^n`` seen in basis coordinates.

    ``twist + Z^n`` is the disjoint union over fundamental points ``g`` of
    ``twist + g + M Z^n``; each piece is ``M(c0 + Z^n)`` for the offset
    vector ``c0 = frac(M^{-1}(twist + g))``.
    """
    twist = make_twist(twist, P.n)
    if P.is_standard:
        return [twist]
    shifts = []
    for g in fundamental_points(P.basis):
        c = solve(P.basis, [t + x for t, x in zip(twist, g)])
        shifts.append(tuple(_frac(x) for x in c))
    return shifts


def axis_weight_residues(seg: Segment1D, x: Fraction) -> set[Fraction]:
    # weights (x+j)/d and (1-x+j)/dp cover every residue mod 1 for j < d, j < dp
    vals = set()
    if seg.d:
        vals.update(_frac((x + j) / seg.d) for j in range(seg.d))
    if seg.dp:
        start = 1 - x if x else Fraction(1)
        vals.update(_frac((start + j) / seg.dp) for j in range(seg.dp))
    if x == 0:
        vals.add(Fraction(0))
    return vals


def denominator(P: DirectSumPolytope, twist: Sequence[Fraction] | None = None) -> int:
    """Least ``D > 0`` with all weights of ``C(P) cap (twist + Z^n)`` in ``(1/D) N``."""
    if twist is None:
        twist = zero_twist(P.n)
    D = 1
    for shift in coset_shifts(P, twist):
        sums = {Fraction(0)}
        for seg, x in zip(P.segments, shift):
            res = axis_weight_residues(seg, x)
            sums = {_frac(a + b) for a in sums for b in res}
        D = reduce(lcm, (s.denominator for s in sums), D)
    return D


def smith_invariants(basis: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors of an integer matrix."""
    return [abs(int(x)) for x in invariant_factors(Matrix(basis), domain=ZZ)]


def epsilon_set(basis: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Kernel of ``M mod 2`` lifted to ``{0, 1}^n``.

    Requires ``Z^n / M Z^n`` to have exponent dividing 2.
    """
    inv = smith_invariants(basis)
    if 0 in inv or any(e not in (1, 2) for e in inv):
        raise PolytopeError("quotient not of exponent 2")
    n = len(basis)
    out = [
        eps
        for eps in itertools.product((0, 1), repeat=n)
        if all(x % 2 == 0 for x in matvec(basis, eps))
    ]
    if len(out) != 2 ** inv.count(2):
        raise PolytopeError("mod 2 kernel has the wrong size")
    return out


def half_points(basis: Sequence[Sequence[int]], eps_set) -> list[tuple[int, ...]]:
    """The points ``(1/2) M eps``; each is an integer vector."""
    out = []
    for eps in eps_set:
        v = matvec(basis, eps)
        if any(x % 2 for x in v):
            raise AssertionError(f"(1/2) M {eps} is not integral")
        out.append(tuple(x // 2 for x in v))
    return out


def nondegenerate_1d(d: int, dp: int, a_d: int, a_minus_dp: int | None, p: int) -> bool:
    """Non-degeneracy of a one-variable Laurent polynomial on ``[-dp, d]``.

    The faces not containing the origin are the endpoints; ``a x^d`` has no
    critical point on the torus exactly when ``a != 0`` and ``p`` does not
    divide ``d``.
    """
    ok_right = d == 0 or (a_d % p != 0 and d % p != 0)
    ok_left = dp == 0 or (a_minus_dp is not None and a_minus_dp % p != 0 and dp % p != 0)
    return ok_right and ok_left
