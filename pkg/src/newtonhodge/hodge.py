"""Poincare series of weight-graded monoid algebras and Hodge polygons.

Everything here works on :class:`~newtonhodge.polytope.DirectSumPolytope`.
Graded dimensions are obtained by counting points of ``C(P) cap (t + Z^n)``
axis by axis and convolving; the Hodge polygon is read off the numerator
``(1 - t^D)^n * series``.

Twists
------
A twist ``t`` is a vector of fractions in ``[0, 1)`` and selects the coset
lattice ``t + Z^n``.  A multiplicative character datum ``r/s`` (the character
``omega^delta`` with ``delta/(q-1) = r/s``, ``omega`` the Teichmuller
character) corresponds to the coset ``-r/s + Z^n``; :func:`character_twist`
does that conversion and the Hodge-Stickelberger functions apply it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd, lcm
from typing import Sequence

from sympy import nextprime

from .polygon import ConvexPolygon, average, juxtapose_all, product_all
from .polytope import (
    DirectSumPolytope,
    Segment1D,
    axis_weight_residues,
    coset_shifts,
    denominator,
    det,
    epsilon_set,
    lattice_volume,
    make_twist,
    zero_twist,
)


class HodgeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PoincarePolynomial:
    D: int
    coeffs: tuple[int, ...]

    def __call__(self, t):
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else -1

    def to_json(self) -> dict:
        return {"D": self.D, "coeffs": list(self.coeffs)}

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon.from_counts(
            {Fraction(i, self.D): c for i, c in enumerate(self.coeffs) if c}
        )


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def character_twist(rs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coset offset ``frac(-r/s)`` attached to the character datum ``r/s``."""
    return tuple(_frac(-Fraction(x)) for x in rs)


# -- graded dimensions ---------------------------------------------------


def _axis_counts(seg: Segment1D, x: Fraction, D: int, bound: int) -> list[int]:
    """Counts of ``v in (x + Z) cap cone`` by weight numerator ``D w(v)``."""
    out = [0] * (bound + 1)

    def bump(w: Fraction):
        k = w * D
        if k.denominator != 1:
            raise HodgeError("weight not in (1/D) N; denominator is wrong")
        if k <= bound:
            out[int(k)] += 1
            return True
        return False

    if x == 0:
        bump(Fraction(0))
    if seg.d:
        j = 1 if x == 0 else 0
        while bump((x + j) / seg.d):
            j += 1
    if seg.dp:
        j = 1 - x if x else Fraction(1)
        while bump(j / seg.dp):
            j += 1
    return out


def _convolve(a: list[int], b: list[int], bound: int) -> list[int]:
    out = [0] * (bound + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), bound + 1 - i)):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def graded_dims(
    P: DirectSumPolytope,
    twist: Sequence[Fraction] | None = None,
    max_weight_numerator: int = 0,
    D: int | None = None,
) -> dict[int, int]:
    """Dimension of each graded piece of weight ``k/D``, ``0 <= k <= bound``."""
    if max_weight_numerator < 0:
        raise ValueError("max_weight_numerator must be nonnegative")
    twist = zero_twist(P.n) if twist is None else make_twist(twist, P.n)
    if D is None:
        D = denominator(P, twist)
    shifts = coset_shifts(P, twist)
    # single axes may need a finer grid than the total weight (1/2 + 1/2 = 1)
    fine = D
    for shift in shifts:
        for seg, x in zip(P.segments, shift):
            fine = reduce(lcm, (w.denominator for w in axis_weight_residues(seg, x)), fine)
    scale = fine // D
    bound = max_weight_numerator * scale
    total = [0] * (bound + 1)
    for shift in shifts:
        acc = [1] + [0] * bound
        for seg, x in zip(P.segments, shift):
            acc = _convolve(acc, _axis_counts(seg, x, fine, bound), bound)
        total = [a + b for a, b in zip(total, acc)]
    if any(c for k, c in enumerate(total) if k % scale):
        raise HodgeError("weight not in (1/D) N; denominator is wrong")
    return {k // scale: c for k, c in enumerate(total) if c}


def poincare_polynomial(
    P: DirectSumPolytope, twist: Sequence[Fraction] | None = None
) -> PoincarePolynomial:
    twist = zero_twist(P.n) if twist is None else make_twist(twist, P.n)
    n = P.n
    D = denominator(P, twist)
    top = n * D
    bound = top + D  # one extra period to confirm the numerator stops at nD
    dims = graded_dims(P, twist, bound, D=D)
    series = [dims.get(k, 0) for k in range(bound + 1)]
    factor = [0] * (top + 1)
    for i in range(n + 1):
        factor[i * D] = (-1) ** i * comb(n, i)
    num = _convolve(series, factor, bound)

    problems = []
    if any(c < 0 for c in num):
        problems.append("negative coefficient")
    if any(num[top + 1 :]):
        problems.append(f"nonzero coefficient above degree {top}")
    vol = lattice_volume(P)
    if sum(num[: top + 1]) != vol:
        problems.append(f"P(1) = {sum(num[: top + 1])} != n!V = {vol}")
    if problems:
        raise HodgeError("Poincaré consistency failure: " + "; ".join(problems))
    return PoincarePolynomial(D, tuple(num[: top + 1]))


def hodge_polygon(
    P: DirectSumPolytope, twist: Sequence[Fraction] | None = None
) -> ConvexPolygon:
    """Polygon with a segment of slope ``s/D`` and length ``l_s`` per term
    ``l_s t^s`` of the Poincare numerator."""
    return poincare_polynomial(P, twist).polygon()


def axis_polygon(seg: Segment1D, x: Fraction) -> ConvexPolygon:
    """Closed-form Hodge polygon of ``[-dp, d]`` on the coset ``x + Z``.

    ``x`` may be any rational in ``[0, 1)``, including orbit averages.
    """
    d, dp = seg.d, seg.dp
    if x == 0:
        if d == 0:
            return ConvexPolygon.from_slopes(Fraction(j, dp) for j in range(dp))
        slopes = [Fraction(j, d) for j in range(d)]
        slopes += [Fraction(j, dp) for j in range(1, dp + 1)]
        return ConvexPolygon.from_slopes(slopes)
    slopes = [(x + j) / d for j in range(d)]
    slopes += [(1 - x + j) / dp for j in range(dp)]
    return ConvexPolygon.from_slopes(slopes)


# -- Stickelberger ---------------------------------------------------------


def multiplicative_order(nu: int, s: int) -> int:
    if gcd(nu, s) != 1:
        raise HodgeError(f"{nu} is not a unit modulo {s}")
    if s == 1:
        return 1
    a, x = 1, nu % s
    while x != 1:
        x = x * nu % s
        a += 1
    return a


def lambda_stickelberger(r: int, s: int, nu: int) -> Fraction:
    """Mean of the cycle of ``j -> nu j mod s`` through ``r``, divided by ``s``."""
    if s < 1 or not 0 <= r < s:
        raise ValueError("need 0 <= r < s")
    if gcd(nu, s) != 1:
        raise HodgeError(f"gcd({nu}, {s}) != 1")
    cycle = [r]
    j = r * nu % s
    while j != r:
        cycle.append(j)
        j = j * nu % s
    return Fraction(sum(cycle), s * len(cycle))


def digit_sum(m: int, base: int) -> int:
    total = 0
    while m:
        m, rem = divmod(m, base)
        total += rem
    return total


def least_prime_congruent(nu: int, s: int) -> int:
    p = 2
    while p % s != nu % s:
        p = int(nextprime(p))
    return p


def lambda_digit_sum(r: int, s: int, p: int) -> Fraction:
    """``s_p((q'-1) r / s) / (a (p - 1))`` with ``q' = p^a``, ``a = ord_s(p)``."""
    a = multiplicative_order(p, s)
    q = p**a
    return Fraction(digit_sum((q - 1) * r // s, p), a * (p - 1))


def _check_unimodular_or_trivial(P: DirectSumPolytope, orbit_len: int):
    if orbit_len > 1 and abs(det(P.basis)) != 1:
        raise HodgeError(
            "twisted Hodge-Stickelberger polygons with a nontrivial Frobenius "
            "orbit need a unimodular basis"
        )


def character_orbit(rs: Sequence[Fraction], nu: int) -> list[tuple[Fraction, ...]]:
    """``frac(nu^i r/s)`` for ``i = 0 .. ord_s(nu) - 1``."""
    rs = make_twist(rs)
    s = reduce(lcm, (x.denominator for x in rs), 1)
    a = multiplicative_order(nu, s)
    return [tuple(_frac(x * nu**i) for x in rs) for i in range(a)]


def orbit_polygons(
    P: DirectSumPolytope, rs: Sequence[Fraction], nu: int
) -> list[ConvexPolygon]:
    """The Hodge polygons of the cosets along the Frobenius orbit of ``r/s``."""
    polys = [hodge_polygon(P, character_twist(t)) for t in character_orbit(rs, nu)]
    if len({len(p) for p in polys}) > 1:
        raise HodgeError("orbit polygons have unequal lengths")
    return polys


def _coherent_average(P: DirectSumPolytope, offsets: list[tuple[Fraction, ...]]) -> ConvexPolygon:
    # Frobenius sends the j-th point on each side of an axis to the j-th point
    # of the next coset in the orbit, so weights are averaged index-wise
    # before sorting.  On a unimodular basis that is the axis polygon at the
    # mean offset.
    shifts = [coset_shifts(P, off)[0] for off in offsets]
    factors = []
    for k, seg in enumerate(P.segments):
        xs = [sh[k] for sh in shifts]
        if any(x == 0 for x in xs) and any(x != 0 for x in xs):
            raise HodgeError("orbit mixes trivial and nontrivial components")
        factors.append(axis_polygon(seg, sum(xs, Fraction(0)) / len(xs)))
    return product_all(factors)


def hs_polygon(P: DirectSumPolytope, rs: Sequence[Fraction], nu: int) -> ConvexPolygon:
    """Hodge-Stickelberger polygon ``HS(P, r/s, nu)``.

    Averages the coset Hodge polygons along the orbit of ``r/s`` under
    multiplication by ``nu``.  The average matches weights point by point
    (Frobenius pairs the j-th lattice point of one coset with the j-th point
    of the next), which reproduces the one-variable slope list
    ``(j - lambda)/d, (lambda + j)/dp`` and its products.  When the orbit has
    one element this is just ``hodge_polygon(P, frac(-r/s))``; in general it
    lies on or above :func:`orbit_average`.
    """
    rs = make_twist(rs, P.n)
    orbit = character_orbit(rs, nu)
    if len(orbit) == 1:
        return hodge_polygon(P, character_twist(rs))
    _check_unimodular_or_trivial(P, len(orbit))
    return _coherent_average(P, [character_twist(t) for t in orbit])


def orbit_average(P: DirectSumPolytope, rs: Sequence[Fraction], nu: int) -> ConvexPolygon:
    """Slope-wise mean of the sorted orbit polygons (``(1/a) sum Pi^(i)``)."""
    return average(orbit_polygons(P, rs, nu))


def hs_polygon_from_prime(
    P: DirectSumPolytope, rs: Sequence[Fraction], p: int, a: int | None = None
) -> ConvexPolygon:
    """HS recomputed from a concrete ``q = p^a`` and ``delta = (q-1) r/s``.

    ``a`` defaults to ``ord_s(p)``; any multiple gives the same polygon.
    """
    rs = make_twist(rs, P.n)
    s = reduce(lcm, (x.denominator for x in rs), 1)
    a0 = multiplicative_order(p % s, s) if s > 1 else 1
    if a is None:
        a = a0
    if a % a0:
        raise HodgeError(f"p^{a} is not 1 modulo {s}")
    q = p**a
    delta = [int((q - 1) * x) for x in rs]
    offsets = []
    for i in range(a):
        di = [(p**i * dk) % (q - 1) for dk in delta]
        offsets.append(tuple(_frac(Fraction(-x, q - 1)) for x in di))
    if all(o == offsets[0] for o in offsets):
        return hodge_polygon(P, offsets[0])
    _check_unimodular_or_trivial(P, len(offsets))
    return _coherent_average(P, offsets)


def hs_1d_closed_form(d: int, dp: int, r: int, s: int, nu: int) -> ConvexPolygon:
    """Slopes ``(1-l)/d, ..., (d-l)/d, l/dp, ..., (dp-1+l)/dp``.

    ``r = 0`` is the trivial character and returns the untwisted list.
    """
    Segment1D(d, dp)
    lam = lambda_stickelberger(r, s, nu)
    if r == 0:
        from .gnp import hp_1d

        return hp_1d(d, dp)
    slopes = [(j - lam) / d for j in range(1, d + 1)]
    slopes += [(lam + j) / dp for j in range(dp)]
    return ConvexPolygon.from_slopes(slopes)


# -- exponent-two decomposition -----------------------------------------


def decH_decomposition(P: DirectSumPolytope) -> tuple[ConvexPolygon, list[ConvexPolygon]]:
    """Split ``HP(P)`` into ``HP(P0)`` and the ``HS(P0, eps/2)``, ``eps != 0``.

    ``P0`` carries the same segments on the standard basis.  Raises
    :class:`HodgeError` if the juxtaposition does not reproduce ``HP(P)``.
    """
    eps_set = epsilon_set(P.basis)
    P0 = P.standard()
    base = hodge_polygon(P0)
    half = Fraction(1, 2)
    twisted = [
        hodge_polygon(P0, [half * e for e in eps]) for eps in eps_set if any(eps)
    ]
    whole = hodge_polygon(P)
    if juxtapose_all([base, *twisted]) != whole:
        raise HodgeError("exponent-two decomposition does not reproduce HP(P)")
    return base, twisted
