"""Generic Newton polygons of one-variable Laurent polynomials.

For ``f`` supported on ``[-dp, d]`` and a prime ``p`` not dividing ``d dp``,
the generic Newton polygon has vertices ``(i, Y_i / (p - 1))`` where ``Y_i``
is the minimum over permutations of ``sum_j ceil(w(p j - sigma(j)))``, taken
over the index window ``{-i2, ..., i1}`` fixed by the first ``i`` Hodge
slopes.  The permutation minimum is an assignment problem and is solved
exactly with the Hungarian method.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import isprime, primerange

from .polygon import (
    ConvexPolygon,
    dominates,
    is_convex_sequence,
    max_deviation,
    product_all,
)
from .polytope import Segment1D


class GNPError(ArithmeticError):
    pass


class InfeasibleAssignment(GNPError):
    pass


def hp_1d(d: int, dp: int) -> ConvexPolygon:
    """Hodge polygon of ``[-dp, d]``: slopes ``0, 1, j/d, j/dp``.

    For ``d = 0`` the segment is reflected (``x -> 1/x``) onto ``[0, dp]``.
    """
    Segment1D(d, dp)
    if d == 0:
        d, dp = dp, 0
    slopes = [Fraction(j, d) for j in range(d)]
    if dp:
        slopes.append(Fraction(1))
        slopes += [Fraction(j, dp) for j in range(1, dp)]
    return ConvexPolygon.from_slopes(slopes)


@dataclass(frozen=True)
class SlopeSplit:
    i: int
    i1: int
    i2: int

    def indices(self) -> list[int]:
        return list(range(-self.i2, self.i1 + 1))


def slope_splits(d: int, dp: int, i: int) -> list[SlopeSplit]:
    """All ``(i1, i2)`` with ``{s_1..s_i} = {0} u {j/d}_{j<=i1} u {j/dp}_{j<=i2}``."""
    if d == 0:
        d, dp = dp, 0
    if not 1 <= i <= d + dp:
        raise ValueError(f"need 1 <= i <= {d + dp}")
    target = sorted(hp_1d(d, dp).slope_list()[:i])
    i2_max = max(dp - 1, 0)
    out = []
    for i2 in range(0, i2_max + 1):
        i1 = i - 1 - i2
        if not 0 <= i1 <= d:
            continue
        got = [Fraction(0)]
        got += [Fraction(j, d) for j in range(1, i1 + 1)]
        got += [Fraction(j, dp) for j in range(1, i2 + 1)]
        if sorted(got) == target:
            out.append(SlopeSplit(i, i1, i2))
    return out


def _weight_ceil(n: int, d: int, dp: int) -> int | None:
    if n > 0:
        return None if d == 0 else -((-n) // d)
    if n < 0:
        return None if dp == 0 else -(n // dp)
    return 0


def cost_matrix(d: int, dp: int, p: int, split: SlopeSplit) -> list[list[int | None]]:
    """``ceil(w(p j - k))`` over the split's index window; ``None`` is forbidden."""
    idx = split.indices()
    return [[_weight_ceil(p * j - k, d, dp) for k in idx] for j in idx]


def min_assignment(cost: Sequence[Sequence[int | None]]) -> tuple[int, list[int]]:
    """Minimum-cost perfect matching, ``None`` entries being forbidden edges.

    Hungarian method with row/column potentials, ``O(n^3)``, exact on
    integers.  Returns ``(total, assignment)`` with ``assignment[row] = col``.
    """
    n = len(cost)
    if n == 0:
        return 0, []
    if any(len(row) != n for row in cost):
        raise ValueError("cost matrix must be square")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[col] = row, 1-based, 0 = free
    way = [0] * (n + 1)
    for row in range(1, n + 1):
        match[0] = row
        j0 = 0
        minv: list[int | None] = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = None
            j1 = None
            for j in range(1, n + 1):
                if used[j]:
                    continue
                c = cost[i0 - 1][j - 1]
                if c is not None:
                    cur = c - u[i0] - v[j]
                    if minv[j] is None or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                if minv[j] is not None and (delta is None or minv[j] < delta):
                    delta = minv[j]
                    j1 = j
            if j1 is None:
                raise InfeasibleAssignment("no perfect matching avoids forbidden edges")
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    assignment = [0] * n
    for col in range(1, n + 1):
        assignment[match[col] - 1] = col - 1
    total = sum(cost[r][assignment[r]] for r in range(n))
    return total, assignment


def brute_force_assignment(cost: Sequence[Sequence[int | None]]) -> int | None:
    """Minimum over all permutations; ``None`` when every one hits a forbidden edge."""
    n = len(cost)
    best = None
    for perm in itertools.permutations(range(n)):
        vals = [cost[r][perm[r]] for r in range(n)]
        if any(v is None for v in vals):
            continue
        s = sum(vals)
        if best is None or s < best:
            best = s
    return best


def _check_prime(d: int, dp: int, p: int):
    if p == 2 or not isprime(p):
        raise GNPError(f"{p} is not an odd prime")
    if (d and d % p == 0) or (dp and dp % p == 0):
        raise GNPError(f"p = {p} divides d or dp; no non-degenerate polynomial exists")


def y_i(d: int, dp: int, p: int, i: int) -> int:
    _check_prime(d, dp, p)
    if d == 0:
        d, dp = dp, 0
    best = None
    for split in slope_splits(d, dp, i):
        try:
            total, _ = min_assignment(cost_matrix(d, dp, p, split))
        except InfeasibleAssignment:
            continue
        if best is None or total < best:
            best = total
    if best is None:
        raise GNPError(f"infeasible split for every decomposition at i = {i}")
    return best


def y_values(d: int, dp: int, p: int) -> list[int]:
    return [y_i(d, dp, p, i) for i in range(1, d + dp + 1)]


def gnp_1d(d: int, dp: int, p: int) -> ConvexPolygon:
    """Generic Newton polygon of ``[-dp, d]`` at ``p``."""
    ys = [Fraction(0)] + [Fraction(y, p - 1) for y in y_values(d, dp, p)]
    if not is_convex_sequence(ys):
        raise GNPError(f"points (i, Y_i/(p-1)) are not convex for d={d}, dp={dp}, p={p}")
    poly = ConvexPolygon.from_slopes(b - a for a, b in zip(ys, ys[1:]))
    if not dominates(poly, hp_1d(d, dp)):
        raise GNPError(f"GNP does not lie above HP for d={d}, dp={dp}, p={p}")
    return poly


def gnp_product(segments: Sequence[tuple[int, int]], p: int) -> ConvexPolygon:
    """Product of the one-variable generic polygons: a lower bound for
    the generic polygon of the direct sum."""
    return product_all(gnp_1d(d, dp, p) for d, dp in segments)


def admissible_primes(d: int, dp: int, p_max: int, p_min: int = 3) -> list[int]:
    return [
        p
        for p in primerange(p_min, p_max + 1)
        if not (d and d % p == 0) and not (dp and dp % p == 0)
    ]


def coincidence_modulus(d: int, dp: int) -> int:
    return math.lcm(*(x for x in (d, dp) if x))


def convergence_table(d: int, dp: int, p_max: int) -> list[tuple[int, Fraction]]:
    """``(p, max deviation between GNP and HP)`` for admissible primes."""
    hp = hp_1d(d, dp)
    return [(p, max_deviation(gnp_1d(d, dp, p), hp)) for p in admissible_primes(d, dp, p_max)]
