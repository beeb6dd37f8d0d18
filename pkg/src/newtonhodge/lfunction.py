"""Brute-force L-functions of exponential sums over small prime fields.

For a Laurent polynomial ``f`` over ``F_p`` and a multiplicative character
``chi`` of order dividing ``p - 1`` we enumerate

    S_r(f, chi) = sum over x in (F_{p^r}^*)^n of psi(Tr f(x)) chi(N x)

exactly in ``Z[zeta_p, zeta_s]``, assemble ``L(f, chi; T)^{(-1)^(n-1)}`` by
Newton's identities and take ``p``-adic valuations of its coefficients
after embedding ``zeta_s`` through the Teichmuller lift of a fixed
primitive root.  The Newton polygon of that polynomial is the object the
Hodge bounds are tested against.

Elements of ``F_{p^r}^*`` are handled through their discrete logarithm with
respect to a primitive element ``alpha``: a precomputed table gives
``Tr(alpha^e)`` for every ``e``, so that ``Tr f(alpha^e)`` is a sum of table
lookups and the whole enumeration vectorises.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

import numpy as np
from sympy import cyclotomic_poly, factorint, isprime, primitive_root
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

from .polygon import ConvexPolygon, dominates, lower_hull
from .polytope import (
    DirectSumPolytope,
    PolytopeError,
    det,
    lattice_volume,
    nondegenerate_1d,
    weight,
)

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 20


class OracleError(ArithmeticError):
    pass


class BudgetError(OracleError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} points, budget is {budget}")
        self.required = required
        self.budget = budget


class DegenerateError(OracleError):
    pass


class PrecisionError(OracleError):
    pass


def _check_odd_prime(p: int):
    if p == 2 or not isprime(p):
        raise OracleError(f"{p} is not an odd prime")


# -- finite fields ---------------------------------------------------------


def _is_primitive(poly: list[int], p: int, r: int) -> bool:
    if not gf_irreducible_p(poly, p, ZZ):
        return False
    q1 = p**r - 1
    x = [1, 0]
    return all(gf_pow_mod(x, q1 // ell, poly, p, ZZ) != [1] for ell in factorint(q1))


def find_primitive_modulus(p: int, r: int, seed: int = 0, attempts: int = 20000) -> tuple[int, ...]:
    """A monic degree-``r`` polynomial over ``F_p`` whose root generates
    ``F_{p^r}^*``.  Coefficients are listed from the leading one down."""
    if r == 1:
        # the root is then the fixed primitive root itself
        return (1, (-primitive_root(p)) % p)
    rng = random.Random(f"{p}:{r}:{seed}")
    for _ in range(attempts):
        poly = [1] + [rng.randrange(p) for _ in range(r)]
        if poly[-1] and _is_primitive(poly, p, r):
            return tuple(poly)
    raise OracleError(f"no primitive polynomial of degree {r} over F_{p} found; retry with another seed")


@dataclass(frozen=True)
class ExtensionField:
    """``F_{p^r} = F_p[x]/(modulus)`` with ``alpha = x`` a multiplicative generator."""

    p: int
    r: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        _check_odd_prime(self.p)
        if len(self.modulus) != self.r + 1 or self.modulus[0] != 1:
            raise OracleError("modulus must be monic of degree r")
        if not _is_primitive(list(self.modulus), self.p, self.r):
            raise OracleError("modulus is not primitive")

    @property
    def q(self) -> int:
        return self.p**self.r

    @cached_property
    def generator(self) -> int:
        """Smallest primitive root of ``F_p``; fixes the prime above ``p``."""
        return int(primitive_root(self.p))

    def companion(self) -> np.ndarray:
        """Matrix of multiplication by ``alpha`` on the basis ``1, alpha, ...``."""
        r, p = self.r, self.p
        low = [c % p for c in reversed(self.modulus[1:])]  # m_0 .. m_{r-1}
        A = np.zeros((r, r), dtype=np.int64)
        for k in range(r - 1):
            A[k + 1, k] = 1
        A[:, r - 1] = [(-c) % p for c in low]
        return A

    @cached_property
    def norm_log(self) -> int:
        """``L`` with ``N(alpha) = g^L``, so that ``N(alpha^e) = g^(e L)``."""
        p = self.p
        norm = ((-1) ** self.r * self.modulus[-1]) % p
        g, x = self.generator, 1
        for k in range(p - 1):
            if x == norm:
                return k
            x = x * g % p
        raise OracleError("norm of alpha is zero")

    def norm(self, e: int) -> int:
        return pow(self.generator, e * self.norm_log, self.p)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """``T[e] = Tr(alpha^e)`` for ``0 <= e < q - 1``."""
        p, r, q1 = self.p, self.r, self.q - 1
        A = self.companion()
        tau = np.zeros(r, dtype=np.int64)  # Tr(alpha^k) = trace of A^k
        Ak = np.eye(r, dtype=np.int64)
        for k in range(r):
            tau[k] = int(np.trace(Ak)) % p
            Ak = Ak @ A % p
        B = min(q1, 4096)
        # coordinates of alpha^j and their traces for j < B + r
        v = np.zeros(r, dtype=np.int64)
        v[0] = 1
        first = np.empty(B + r, dtype=np.int64)
        for j in range(B + r):
            first[j] = int(v @ tau) % p
            v = A @ v % p
        W = np.stack([first[k : k + B] for k in range(r)])  # W[k, j] = Tr(alpha^(k+j))
        AB = _matpow_mod(A, B, p)
        nblocks = -(-q1 // B)
        starts = np.empty((nblocks, r), dtype=np.int64)
        v = np.zeros(r, dtype=np.int64)
        v[0] = 1
        for b in range(nblocks):
            starts[b] = v
            v = AB @ v % p
        out = np.empty(nblocks * B, dtype=np.int32)
        rows = max(1, CHUNK // B)
        for b0 in range(0, nblocks, rows):
            chunk = starts[b0 : b0 + rows] @ W % p
            out[b0 * B : b0 * B + chunk.size] = chunk.ravel()
        return out[:q1]


def _matpow_mod(A: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(A.shape[0], dtype=np.int64)
    base = A % p
    while e:
        if e & 1:
            result = result @ base % p
        base = base @ base % p
        e >>= 1
    return result


_FIELDS: dict = {}


def build_field(p: int, r: int, seed: int = 0) -> ExtensionField:
    _check_odd_prime(p)
    if r < 1:
        raise OracleError("extension degree must be positive")
    key = (p, r, seed)
    if key not in _FIELDS:
        _FIELDS[key] = ExtensionField(p, r, find_primitive_modulus(p, r, seed))
    return _FIELDS[key]


# -- polynomials and characters -------------------------------------------


@dataclass(frozen=True)
class LaurentPolynomial:
    p: int
    n: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        merged: dict = {}
        for exp, c in self.terms:
            exp = tuple(int(x) for x in exp)
            if len(exp) != self.n:
                raise OracleError(f"exponent {exp} has the wrong length")
            merged[exp] = (merged.get(exp, 0) + int(c)) % self.p
        terms = tuple(sorted((e, c) for e, c in merged.items() if c))
        if not terms:
            raise OracleError("polynomial has empty support")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, p: int, terms: dict) -> "LaurentPolynomial":
        items = [((e,) if isinstance(e, int) else tuple(e), c) for e, c in terms.items()]
        return cls(p, len(items[0][0]), tuple(items))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "terms": [{"exp": list(e), "coeff": c} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LaurentPolynomial":
        try:
            p, n = int(obj["p"]), int(obj["n"])
            terms = tuple((tuple(t["exp"]), int(t["coeff"])) for t in obj["terms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise OracleError(f"malformed polynomial description: {exc}") from exc
        return cls(p, n, terms)

    @classmethod
    def load(cls, path) -> "LaurentPolynomial":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def coeff(self, exp) -> int:
        return dict(self.terms).get(tuple(exp), 0)

    def substitute_power(self, k: int) -> "LaurentPolynomial":
        """``f(x_1^k, ..., x_n^k)``."""
        return LaurentPolynomial(self.p, self.n, tuple((tuple(k * x for x in e), c) for e, c in self.terms))

    def blocks(self) -> list[list[int]]:
        """Variables grouped into classes that share a monomial."""
        parent = list(range(self.n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e, _ in self.terms:
            live = [i for i, x in enumerate(e) if x]
            for i in live[1:]:
                parent[find(i)] = find(live[0])
        groups: dict = {}
        for i in range(self.n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())


def split_sum(f1: LaurentPolynomial, f2: LaurentPolynomial) -> LaurentPolynomial:
    """``f1(x) + f2(y)`` in disjoint variables."""
    if f1.p != f2.p:
        raise OracleError("polynomials over different fields")
    terms = [(e + (0,) * f2.n, c) for e, c in f1.terms]
    terms += [((0,) * f1.n + e, c) for e, c in f2.terms]
    return LaurentPolynomial(f1.p, f1.n + f2.n, tuple(terms))


@dataclass(frozen=True)
class CharacterSpec:
    """``chi = prod chi_i`` with ``chi_i = omega^((p-1) r_i/s_i)``."""

    p: int
    fracs: tuple[Fraction, ...]

    def __post_init__(self):
        fr = []
        for x in self.fracs:
            x = Fraction(x)
            fr.append(x - math.floor(x))
        for x in fr:
            if (self.p - 1) % x.denominator:
                raise OracleError(f"character order {x.denominator} does not divide p - 1 = {self.p - 1}")
        object.__setattr__(self, "fracs", tuple(fr))

    @classmethod
    def trivial(cls, p: int, n: int) -> "CharacterSpec":
        return cls(p, (Fraction(0),) * n)

    @property
    def s(self) -> int:
        return reduce(math.lcm, (x.denominator for x in self.fracs), 1)

    def exponents(self) -> list[int]:
        """``chi_i(g^k) = zeta_s^(k * exponents[i])``."""
        s = self.s
        return [int(x * s) for x in self.fracs]

    @property
    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.fracs)


# -- cyclotomic integers ---------------------------------------------------


@dataclass(frozen=True)
class CyclotomicElement:
    """Element of ``Z[zeta_p, zeta_s]`` on the basis ``zeta_p^i zeta_s^j``,
    ``0 <= i < p - 1``, ``0 <= j < phi(s)``.

    ``coords`` is a ``(p-1) x phi(s)`` nested tuple of Python integers or
    Fractions; the reduction modulo both cyclotomic polynomials is canonical
    so equality is coordinate equality.
    """

    p: int
    s: int
    coords: tuple

    @staticmethod
    def phi_s_coeffs(s: int) -> list[int]:
        return [int(c) for c in cyclotomic_poly(s).as_poly().all_coeffs()]

    @classmethod
    def from_group_ring(cls, p: int, s: int, table) -> "CyclotomicElement":
        """Reduce ``sum table[i][j] zeta_p^i zeta_s^j`` (a ``p x s`` table)."""
        rows = [list(row) for row in table]
        # zeta_p^(p-1) = -(1 + ... + zeta_p^(p-2))
        last = rows[p - 1]
        rows = [[a - b for a, b in zip(row, last)] for row in rows[: p - 1]]
        phi = cls.phi_s_coeffs(s)
        deg = len(phi) - 1
        out = []
        for row in rows:
            row = list(row)
            for top in range(len(row) - 1, deg - 1, -1):
                c = row[top]
                if c:
                    for k in range(1, deg + 1):
                        row[top - k] -= c * phi[k]
                    row[top] = 0
            out.append(tuple(row[:deg]))
        return cls(p, s, tuple(out))

    @classmethod
    def from_int(cls, p: int, s: int, a) -> "CyclotomicElement":
        table = [[0] * s for _ in range(p)]
        table[0][0] = a
        return cls.from_group_ring(p, s, table)

    @classmethod
    def zeta_p_power(cls, p: int, s: int, i: int) -> "CyclotomicElement":
        table = [[0] * s for _ in range(p)]
        table[i % p][0] = 1
        return cls.from_group_ring(p, s, table)

    def _table(self) -> list[list]:
        t = [[0] * self.s for _ in range(self.p)]
        for i, row in enumerate(self.coords):
            for j, c in enumerate(row):
                t[i][j] = c
        return t

    def _check(self, other):
        if (self.p, self.s) != (other.p, other.s):
            raise OracleError("cyclotomic elements of different rings")

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._check(other)
        return CyclotomicElement(
            self.p,
            self.s,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coords, other.coords)),
        )

    def scale(self, c) -> "CyclotomicElement":
        return CyclotomicElement(self.p, self.s, tuple(tuple(c * a for a in row) for row in self.coords))

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._check(other)
        p, s = self.p, self.s
        out = [[0] * s for _ in range(p)]
        b = [(i, j, c) for i, row in enumerate(other.coords) for j, c in enumerate(row) if c]
        for i1, row in enumerate(self.coords):
            for j1, a in enumerate(row):
                if not a:
                    continue
                for i2, j2, c in b:
                    out[(i1 + i2) % p][(j1 + j2) % s] += a * c
        return CyclotomicElement.from_group_ring(p, s, out)

    def is_zero(self) -> bool:
        return not any(a for row in self.coords for a in row)

    def is_integral(self) -> bool:
        return all(Fraction(a).denominator == 1 for row in self.coords for a in row)

    def divide_exact(self, k: int) -> "CyclotomicElement":
        """Division by a rational integer; raises unless the result is integral."""
        rows = []
        for row in self.coords:
            new = []
            for a in row:
                if a % k:
                    raise OracleError("non-integral L-coefficient")
                new.append(a // k)
            rows.append(tuple(new))
        return CyclotomicElement(self.p, self.s, tuple(rows))

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "coords": [[str(a) for a in row] for row in self.coords]}


def teichmuller(g: int, p: int, N: int) -> int:
    """The ``(p-1)``-th root of unity in ``Z/p^N`` congruent to ``g``."""
    mod = p**N
    t = g % mod
    for _ in range(N):
        t = pow(t, p, mod)
    return t


def pi_adic_valuation(c: CyclotomicElement, precision: int | None = None, generator: int | None = None):
    """``v_p(c)`` at the prime fixed by the Teichmuller lift of ``generator``.

    Returns a Fraction, or ``math.inf`` when ``c`` is zero.  ``precision``
    is the starting ``p``-adic precision; it is doubled twice before giving
    up on a nonzero element.
    """
    if not c.is_integral():
        raise OracleError("valuation needs integral coordinates")
    if c.is_zero():
        return math.inf
    p, s = c.p, c.s
    g = int(primitive_root(p)) if generator is None else generator
    N = precision or 16
    for _ in range(3):
        v = _valuation_at(c, p, s, g, N)
        if v is not None:
            return v
        N *= 2
    raise PrecisionError("insufficient p-adic precision")


def _valuation_at(c: CyclotomicElement, p: int, s: int, g: int, N: int):
    mod = p**N
    zs = pow(teichmuller(g, p, N), (p - 1) // s, mod)
    zs_pows = [pow(zs, j, mod) for j in range(len(c.coords[0]))]
    b = [sum(int(a) * z for a, z in zip(row, zs_pows)) % mod for row in c.coords]
    # zeta_p^i = (1 + pi)^i with pi = zeta_p - 1 of valuation 1/(p-1)
    best = None
    for k in range(p - 1):
        e = sum(math.comb(i, k) * b[i] for i in range(k, p - 1)) % mod
        if e == 0:
            continue
        vp = 0
        while e % p == 0:
            e //= p
            vp += 1
        cand = Fraction(k + (p - 1) * vp, p - 1)
        if best is None or cand < best:
            best = cand
    return best


# -- exponential sums ------------------------------------------------------


def enumeration_size(f: LaurentPolynomial, r: int, separate: bool = True) -> int:
    """Points in the largest single enumeration pass for ``S_r``."""
    q1 = f.p**r - 1
    if not separate:
        return q1**f.n
    return max(q1 ** len(b) for b in f.blocks())


def _block_table(F: ExtensionField, f: LaurentPolynomial, chi: CharacterSpec, block: list[int]) -> np.ndarray:
    """``cnt[t, c]`` = number of ``x`` in the block's torus with
    ``Tr f_block(x) = t`` and ``chi_block(N x) = zeta_s^c``."""
    p, q1, s = F.p, F.q - 1, chi.s
    T = F.trace_table
    terms = [(np.array([e[i] for i in block], dtype=np.int64), c) for e, c in f.terms if any(e[i] for i in block)]
    kexp = np.array([chi.exponents()[i] for i in block], dtype=np.int64)
    L = F.norm_log
    m = len(block)
    total = q1**m
    counts = np.zeros(p * s, dtype=np.int64)
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        idx = np.stack(np.unravel_index(flat, (q1,) * m), axis=1) if m > 1 else flat[:, None]
        t = np.zeros(len(flat), dtype=np.int64)
        for u, c in terms:
            t += c * T[(idx @ u) % q1].astype(np.int64)
        t %= p
        ch = ((idx @ kexp) % s) * L % s if s > 1 else np.zeros(len(flat), dtype=np.int64)
        counts += np.bincount(t * s + ch, minlength=p * s)
    return counts.reshape(p, s)


def _convolve_tables(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p, s = a.shape
    out = np.zeros((p, s), dtype=object)
    for i in range(p):
        for j in range(s):
            if a[i, j]:
                out += int(a[i, j]) * np.roll(np.roll(b.astype(object), i, axis=0), j, axis=1)
    return out


def exp_sum(
    f: LaurentPolynomial,
    chi: CharacterSpec | None = None,
    r: int = 1,
    budget: int = DEFAULT_BUDGET,
    separate: bool = True,
    seed: int = 0,
) -> CyclotomicElement:
    """``S_r(f, chi)`` as an exact element of ``Z[zeta_p, zeta_s]``.

    With ``separate`` the variables are split into independent blocks and
    the block distributions are convolved; otherwise the full torus is
    enumerated (used to cross-check the splitting).
    """
    p = f.p
    chi = CharacterSpec.trivial(p, f.n) if chi is None else chi
    if chi.p != p or len(chi.fracs) != f.n:
        raise OracleError("character does not match the polynomial")
    need = enumeration_size(f, r, separate)
    if need > budget:
        raise BudgetError(need, budget)
    F = build_field(p, r, seed)
    s = chi.s
    blocks = f.blocks() if separate else [list(range(f.n))]
    table = None
    # the constant term sits in no block
    const = f.coeff((0,) * f.n)
    for block in blocks:
        cnt = _block_table(F, f, chi, block)
        table = cnt.astype(object) if table is None else _convolve_tables(table, cnt)
    if const:
        shift = const * r % p  # Tr of a constant
        table = np.roll(table, shift, axis=0)
    return CyclotomicElement.from_group_ring(p, s, table.tolist())


# -- L-polynomials ---------------------------------------------------------


def l_polynomial(sums: Sequence[CyclotomicElement], n: int, expected_degree: int) -> list[CyclotomicElement]:
    """Coefficients ``c_0 .. c_m`` of ``L^((-1)^(n-1))`` from ``S_1 .. S_m``.

    Uses ``k c_k = eps sum_{r<=k} S_r c_{k-r}``; every ``c_k`` must come out
    integral, vanish beyond ``expected_degree`` and be nonzero at it.
    """
    m = len(sums)
    if m < expected_degree + 2:
        raise OracleError("need at least expected_degree + 2 power sums")
    p, s = sums[0].p, sums[0].s
    eps = 1 if n % 2 == 1 else -1
    coeffs = [CyclotomicElement.from_int(p, s, 1)]
    for k in range(1, m + 1):
        acc = CyclotomicElement.from_int(p, s, 0)
        for r in range(1, k + 1):
            acc = acc + sums[r - 1] * coeffs[k - r]
        coeffs.append(acc.scale(eps).divide_exact(k))
    if coeffs[expected_degree].is_zero():
        raise DegenerateError(f"degree check failed: c_{expected_degree} vanishes")
    extra = [k for k in range(expected_degree + 1, m + 1) if not coeffs[k].is_zero()]
    if extra:
        raise DegenerateError(f"degree check failed: f likely degenerate (c_{extra[0]} != 0)")
    return coeffs


# -- Newton polygons -------------------------------------------------------


def infer_polytope(f: LaurentPolynomial) -> DirectSumPolytope:
    """Direct sum of segments on the standard axes spanned by the support.

    Every monomial must lie on a coordinate axis.
    """
    d = [0] * f.n
    dp = [0] * f.n
    for e, _ in f.terms:
        live = [i for i, x in enumerate(e) if x]
        if len(live) > 1:
            raise DegenerateError(f"monomial {e} is off the coordinate axes; pass the polytope explicitly")
        for i in live:
            d[i] = max(d[i], e[i])
            dp[i] = max(dp[i], -e[i])
    try:
        return DirectSumPolytope.from_segments(list(zip(d, dp)))
    except PolytopeError as exc:
        raise DegenerateError(f"support does not span a full-dimensional polytope: {exc}") from exc


def _rank_mod_p(cols: list[list[int]], p: int) -> int:
    rows = [list(x % p for x in col) for col in cols]
    rank = 0
    ncol = len(rows[0]) if rows else 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] * inv % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def check_nondegenerate(f: LaurentPolynomial, P: DirectSumPolytope) -> None:
    """Raise :class:`DegenerateError` unless ``f`` is non-degenerate for ``P``.

    Certification covers supports on the axes ``Q f_i``: the face
    polynomials are then sums of vertex monomials with independent
    exponents, non-degenerate exactly when those exponents stay
    independent modulo ``p``.
    """
    p = f.p
    M = P.basis
    cols = []
    for seg_i, seg in enumerate(P.segments):
        col = [M[r][seg_i] for r in range(P.n)]
        a_d = f.coeff([seg.d * x for x in col]) if seg.d else 1
        a_m = f.coeff([-seg.dp * x for x in col]) if seg.dp else 1
        if seg.d and not a_d:
            raise DegenerateError(f"missing vertex monomial {seg.d} f_{seg_i}")
        if seg.dp and not a_m:
            raise DegenerateError(f"missing vertex monomial -{seg.dp} f_{seg_i}")
        if not nondegenerate_1d(seg.d, seg.dp, a_d, a_m, p):
            raise DegenerateError(f"axis {seg_i}: p = {p} divides an endpoint of [-{seg.dp}, {seg.d}]")
        cols.append(col)
    for e, _ in f.terms:
        w = weight(P, e)
        if w is None or w > 1:
            raise DegenerateError(f"monomial {e} lies outside the polytope")
        c = P.coordinates(e)
        if sum(1 for x in c if x) > 1:
            raise DegenerateError(
                f"monomial {e} is off the axes; non-degeneracy cannot be certified"
            )
    if det(M) % p == 0:
        # vertex exponents d_i f_i may become dependent modulo p
        for sel in _sign_selections(P):
            vecs = [[sgn * k * x for x in cols[i]] for i, sgn, k in sel]
            if _rank_mod_p(vecs, p) < len(vecs):
                raise DegenerateError("vertex exponents of a face are dependent modulo p")


def _sign_selections(P: DirectSumPolytope):
    options = []
    for i, seg in enumerate(P.segments):
        opt = [None]
        if seg.d:
            opt.append((i, 1, seg.d))
        if seg.dp:
            opt.append((i, -1, seg.dp))
        options.append(opt)
    for combo in itertools.product(*options):
        sel = [c for c in combo if c is not None]
        if sel:
            yield sel


@dataclass
class LFunctionResult:
    f: LaurentPolynomial
    chi: CharacterSpec
    polytope: DirectSumPolytope
    expected_degree: int
    sums: list
    coeffs: list
    valuations: list
    polygon: ConvexPolygon
    hodge: ConvexPolygon = field(default=None)

    @property
    def dominates_hodge(self) -> bool:
        return dominates(self.polygon, self.hodge)

    @property
    def equals_hodge(self) -> bool:
        return self.polygon == self.hodge


def l_function(
    f: LaurentPolynomial,
    chi: CharacterSpec | None = None,
    budget: int = DEFAULT_BUDGET,
    polytope: DirectSumPolytope | None = None,
    separate: bool = True,
    seed: int = 0,
    check: bool = True,
) -> LFunctionResult:
    """Enumerate, assemble and take valuations for ``L(f, chi)`` over ``F_p``."""
    from .hodge import character_twist, hodge_polygon

    p = f.p
    _check_odd_prime(p)
    chi = CharacterSpec.trivial(p, f.n) if chi is None else chi
    P = infer_polytope(f) if polytope is None else polytope
    if P.n != f.n:
        raise OracleError("polytope dimension does not match the polynomial")
    if check:
        check_nondegenerate(f, P)
    N = lattice_volume(P)
    m = N + 2
    need = max(enumeration_size(f, r, separate) for r in range(1, m + 1))
    if need > budget:
        raise BudgetError(need, budget)
    sums = [exp_sum(f, chi, r, budget, separate, seed) for r in range(1, m + 1)]
    coeffs = l_polynomial(sums, f.n, N)  # c_0 .. c_{N+2}, the tail checked zero
    prec = 4 * N + 8
    g = build_field(p, 1, seed).generator
    vals = [pi_adic_valuation(c, prec, g) for c in coeffs[: N + 1]]
    pts = [(k, v) for k, v in enumerate(vals) if v != math.inf]
    poly = lower_hull(pts)
    hodge = hodge_polygon(P, character_twist(chi.fracs))
    res = LFunctionResult(f, chi, P, N, sums, coeffs, vals, poly, hodge)
    if check and not res.dominates_hodge:
        raise OracleError("Newton polygon lies below the Hodge polygon")
    return res


def newton_polygon_L(
    f: LaurentPolynomial,
    chi: CharacterSpec | None = None,
    budget: int = DEFAULT_BUDGET,
    polytope: DirectSumPolytope | None = None,
    **kw,
) -> ConvexPolygon:
    return l_function(f, chi, budget, polytope, **kw).polygon


# -- sampling --------------------------------------------------------------


def random_polynomial_1d(d: int, dp: int, p: int, rng: random.Random, constant: bool = False) -> LaurentPolynomial:
    """Random ``f`` on ``[-dp, d]`` with nonzero endpoint coefficients."""
    terms = []
    for k in range(-dp, d + 1):
        if k == 0 and not constant:
            continue
        if k in (d, -dp):
            c = rng.randrange(1, p)
        else:
            c = rng.randrange(p)
        if c:
            terms.append(((k,), c))
    return LaurentPolynomial(p, 1, tuple(terms))
