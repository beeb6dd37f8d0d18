"""Command line driver.

Every subcommand builds a :class:`RunReport` and prints it as JSON (or CSV
for tables).  Numbers are exact rational strings.  Exit codes: 0 success,
1 a verification check failed, 2 bad input, 3 a mathematical consistency
error, 4 a degenerate polynomial.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import gnp as G
from . import hodge as H
from . import lfunction as LF
from . import polygon as PG
from . import polytope as PT

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MATH, EXIT_DEGENERATE = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    table: list | None = None
    table_header: list | None = None

    def check(self, name: str, passed: bool, detail=""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": str(detail)})

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks,
        }
        if self.table is not None:
            out["table"] = {"header": self.table_header, "rows": self.table}
        return out

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.table is not None:
                w.writerow(self.table_header)
                w.writerows(self.table)
            else:
                w.writerow(["section", "key", "value"])
                for k, v in self.results.items():
                    w.writerow(["result", k, json.dumps(v, sort_keys=True)])
                for c in self.checks:
                    w.writerow(["check", c["name"], "pass" if c["passed"] else "fail"])
            return buf.getvalue()
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def poly_json(p: PG.ConvexPolygon) -> dict:
    return p.to_json()


# -- input parsing ---------------------------------------------------------


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def load_polytope(path: str) -> PT.DirectSumPolytope:
    try:
        return PT.DirectSumPolytope.load(path)
    except (OSError, json.JSONDecodeError, PT.PolytopeError) as exc:
        raise InputError(f"cannot read polytope {path}: {exc}") from exc


def load_poly(path: str) -> LF.LaurentPolynomial:
    try:
        return LF.LaurentPolynomial.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read polynomial {path}: {exc}") from exc
    except LF.OracleError as exc:
        raise InputError(str(exc)) from exc


def parse_twist(values, n: int) -> tuple[Fraction, ...]:
    if not values:
        return PT.zero_twist(n)
    fr = [parse_fraction(v) for v in values]
    if len(fr) != n:
        raise InputError(f"twist has {len(fr)} entries, polytope has dimension {n}")
    return PT.make_twist(fr)


def parse_product(spec: str) -> list[tuple[int, int]]:
    out = []
    try:
        for part in spec.split(";"):
            d, dp = part.split(",")
            out.append((int(d), int(dp)))
    except ValueError as exc:
        raise InputError(f"bad product spec {spec!r}; expected 'd,dp;d,dp'") from exc
    return out


def check_gnp_prime(segments, p: int):
    if p == 2 or not G.isprime(p):
        raise InputError(f"p = {p} is not an odd prime")
    for d, dp in segments:
        if (d and d % p == 0) or (dp and dp % p == 0):
            raise InputError(f"p = {p} divides an endpoint of [-{dp}, {d}]")


# -- commands --------------------------------------------------------------


def cmd_hodge(args) -> RunReport:
    P = load_polytope(args.polytope)
    twist = parse_twist(args.twist, P.n)
    rep = RunReport("hodge", {"polytope": P.to_json(), "twist": [str(x) for x in twist]})
    pp = H.poincare_polynomial(P, twist)
    rep.results["poincare"] = pp.to_json()
    rep.results["polygon"] = poly_json(pp.polygon())
    rep.check("poincare-consistency", True)
    return rep


def cmd_hs(args) -> RunReport:
    P = load_polytope(args.polytope)
    rs = parse_twist(args.rs, P.n)
    rep = RunReport("hs", {"polytope": P.to_json(), "rs": [str(x) for x in rs], "nu": args.nu})
    hs = H.hs_polygon(P, rs, args.nu)
    rep.results["polygon"] = poly_json(hs)
    rep.results["orbit"] = [[str(x) for x in t] for t in H.character_orbit(rs, args.nu)]
    if P.n == 1 and P.is_standard and rs[0] != 0:
        seg = P.segments[0]
        closed = H.hs_1d_closed_form(seg.d, seg.dp, rs[0].numerator, rs[0].denominator, args.nu)
        rep.check("closed-form", closed == hs, closed)
    return rep


def cmd_gnp(args) -> RunReport:
    if args.product:
        segs = parse_product(args.product)
    elif args.d is not None:
        segs = [(args.d, args.dp)]
    else:
        raise InputError("give --d/--dp or --product")
    for d, dp in segs:
        if d < 0 or dp < 0 or d == dp == 0:
            raise InputError(f"invalid segment ({d}, {dp})")
    check_gnp_prime(segs, args.p)
    rep = RunReport("gnp", {"segments": [list(s) for s in segs], "p": args.p})
    if len(segs) == 1:
        d, dp = segs[0]
        poly = G.gnp_1d(d, dp, args.p)
        hp = G.hp_1d(d, dp)
        rep.results["Y"] = G.y_values(d, dp, args.p)
    else:
        poly = G.gnp_product(segs, args.p)
        hp = H.hodge_polygon(PT.DirectSumPolytope.from_segments(segs))
    rep.results["polygon"] = poly_json(poly)
    rep.results["hodge"] = poly_json(hp)
    rep.results["coincides_with_hp"] = poly == hp
    rep.results["max_deviation"] = str(PG.max_deviation(poly, hp))
    rep.check("dominates-hp", PG.dominates(poly, hp))
    return rep


def _block_poly(f: LF.LaurentPolynomial, block: list[int]) -> LF.LaurentPolynomial:
    terms = [(tuple(e[i] for i in block), c) for e, c in f.terms if any(e[i] for i in block)]
    return LF.LaurentPolynomial(f.p, len(block), tuple(terms))


def cmd_np(args) -> RunReport:
    f = load_poly(args.poly)
    chi_fr = [parse_fraction(x) for x in args.chi] if args.chi else [Fraction(0)] * f.n
    if len(chi_fr) != f.n:
        raise InputError("character has the wrong number of components")
    try:
        chi = LF.CharacterSpec(f.p, tuple(chi_fr))
    except LF.OracleError as exc:
        raise InputError(str(exc)) from exc
    P = load_polytope(args.polytope) if args.polytope else None
    rep = RunReport("np", {"poly": f.to_json(), "chi": [str(x) for x in chi.fracs], "budget": args.budget})
    res = LF.l_function(f, chi, args.budget, P, seed=args.seed)
    rep.results["polygon"] = poly_json(res.polygon)
    rep.results["hodge"] = poly_json(res.hodge)
    rep.results["valuations"] = [str(v) for v in res.valuations]
    rep.results["degree"] = res.expected_degree
    rep.check("dominates-hp", res.dominates_hodge)
    rep.check("degree", True, f"c_m = 0 for {res.expected_degree} < m <= {res.expected_degree + 2}")
    rep.results["equals_hp"] = res.equals_hodge
    if f.n == 1 and chi.is_trivial:
        seg = res.polytope.segments[0]
        if res.polytope.is_standard:
            rep.results["equals_gnp"] = res.polygon == G.gnp_1d(seg.d, seg.dp, f.p)
    blocks = f.blocks()
    if len(blocks) > 1 and P is None:
        parts = []
        for b in blocks:
            fb = _block_poly(f, b)
            cb = LF.CharacterSpec(f.p, tuple(chi.fracs[i] for i in b))
            parts.append(LF.newton_polygon_L(fb, cb, args.budget, seed=args.seed))
        rep.check("product-identity", PG.product_all(parts) == res.polygon)
    return rep


def cmd_decompose(args) -> RunReport:
    P = load_polytope(args.polytope)
    rep = RunReport("decompose", {"polytope": P.to_json()})
    try:
        eps = PT.epsilon_set(P.basis)
    except PT.PolytopeError as exc:
        raise InputError(str(exc)) from exc
    base, twisted = H.decH_decomposition(P)
    rep.results["epsilon"] = [list(e) for e in eps]
    rep.results["untwisted"] = poly_json(base)
    rep.results["twisted"] = [poly_json(t) for t in twisted]
    rep.results["hodge"] = poly_json(H.hodge_polygon(P))
    rep.check("juxtaposition", True)
    return rep


def cmd_limit_table(args) -> RunReport:
    d, dp = args.d, args.dp
    if d < 0 or dp < 0 or d == dp == 0:
        raise InputError(f"invalid segment ({d}, {dp})")
    if args.pmax < 3:
        raise InputError("pmax must be at least 3")
    inputs = {"d": d, "dp": dp, "pmax": args.pmax}
    if args.s is None:
        rep = RunReport("limit-table", inputs)
        hp = G.hp_1d(d, dp)
        rows = []
        for p in G.admissible_primes(d, dp, args.pmax):
            ys = G.y_values(d, dp, p)
            dev = PG.max_deviation(G.gnp_1d(d, dp, p), hp)
            rows.append([p, str(dev), " ".join(map(str, ys))])
        rep.table_header = ["p", "deviation", "Y"]
        rep.table = rows
        devs = [Fraction(r[1]) for r in rows]
        if devs:
            rep.results["last_deviation"] = str(devs[-1])
            rep.results["max_tail_deviation"] = str(max(devs[len(devs) // 2 :]))
        m = G.coincidence_modulus(d, dp)
        rep.check(
            "coincidence",
            all(Fraction(r[1]) == 0 for r in rows if r[0] % m == 1),
            f"deviation is 0 at p = 1 mod {m}",
        )
        return rep

    s, nu = args.s, args.nu % args.s
    if math.gcd(nu, s) != 1:
        raise InputError(f"nu = {args.nu} is not a unit modulo {s}")
    r = args.r
    if not 0 < r < s:
        raise InputError("need 0 < r < s")
    inputs.update({"s": s, "nu": nu, "r": r, "samples": args.samples})
    rep = RunReport("limit-table", inputs)
    hs = H.hs_1d_closed_form(d, dp, r, s, nu)
    rep.results["hs"] = poly_json(hs)
    rng = random.Random(args.seed)
    rows = []
    for p in G.admissible_primes(d, dp, args.pmax):
        if p % s != nu:
            continue
        if (p - 1) % s:
            # q = p only carries characters of order dividing p - 1
            rows.append([p, "n/a", "n/a"])
            continue
        chi = LF.CharacterSpec(p, (Fraction(r, s),))
        best = None
        hits = 0
        for _ in range(args.samples):
            f = LF.random_polynomial_1d(d, dp, p, rng)
            try:
                np_ = LF.newton_polygon_L(f, chi, args.budget, seed=args.seed)
            except LF.BudgetError:
                best = None
                break
            dev = PG.max_deviation(np_, hs)
            hits += np_ == hs
            best = dev if best is None else min(best, dev)
        rows.append([p, "n/a" if best is None else str(best), str(hits)])
    rep.table_header = ["p", "min_deviation_from_hs", "samples_equal_hs"]
    rep.table = rows
    return rep


# -- verification suites ---------------------------------------------------


def _random_segment(rng, top=5, length=None):
    while True:
        d, dp = rng.randint(0, top), rng.randint(0, top)
        if (d or dp) and (length is None or d + dp <= length):
            return d, dp


def suite_polygon_algebra(rep: RunReport, rng: random.Random):
    for _ in range(30):
        polys = [
            PG.ConvexPolygon.from_slopes(Fraction(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(4))
            for _ in range(3)
        ]
        a, b, c = polys
        rep.check("product-commutes", a * b == b * a, (a, b))
        rep.check("product-associates", (a * b) * c == a * (b * c), (a, b, c))
        rep.check("juxtapose-length", len(a | b) == len(a) + len(b))
        avg = PG.average([a, b])
        rep.check("average-endpoint", avg.total() == (a.total() + b.total()) / 2)
        rep.check("roundtrip", PG.ConvexPolygon.from_json(json.loads(json.dumps(a.to_json()))) == a)


def suite_hodge_product(rep: RunReport, rng: random.Random):
    for _ in range(20):
        a = PT.segment(*_random_segment(rng))
        b = PT.segment(*_random_segment(rng))
        lhs = H.hodge_polygon(PT.direct_sum(a, b))
        rhs = H.hodge_polygon(a) * H.hodge_polygon(b)
        rep.check("hodge-product", lhs == rhs, f"{a.segments} + {b.segments}")


def random_exponent2_basis(rng: random.Random, n: int, k: int) -> list[list[int]]:
    """``U diag(1.., 2..) V`` for random unimodular ``U, V``."""
    diag = [[(2 if i >= n - k else 1) if i == j else 0 for j in range(n)] for i in range(n)]

    def unimodular():
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(2 * n):
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            if i == j:
                continue
            c = rng.choice([-1, 1])
            m = [row[:] for row in m]
            for r in range(n):
                m[r][i] += c * m[r][j]
        return m

    def mul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]

    return mul(mul(unimodular(), diag), unimodular())


def suite_decH(rep: RunReport, rng: random.Random):
    for _ in range(8):
        n = rng.randint(1, 3)
        k = rng.randint(1, n)
        M = random_exponent2_basis(rng, n, k)
        segs = [_random_segment(rng, 3) for _ in range(n)]
        P = PT.DirectSumPolytope.from_segments(segs, M)
        try:
            H.decH_decomposition(P)
            rep.check("decH", True, f"M={M} segs={segs}")
        except H.HodgeError as exc:
            rep.check("decH", False, f"M={M} segs={segs}: {exc}")


def suite_lambda(rep: RunReport, rng: random.Random):
    for s in range(1, 13):
        for nu in range(1, s + 1):
            if math.gcd(nu, s) != 1:
                continue
            p = H.least_prime_congruent(nu, s)
            for r in range(s):
                a = H.lambda_stickelberger(r, s, nu)
                b = H.lambda_digit_sum(r, s, p)
                if a != b:
                    rep.check("lambda", False, f"r={r} s={s} nu={nu}: {a} != {b}")
    rep.check("lambda", True, "all s <= 12")


def suite_hs_1d(rep: RunReport, rng: random.Random):
    for s in range(2, 7):
        for nu in range(1, s):
            if math.gcd(nu, s) != 1:
                continue
            for r in range(1, s):
                for d in range(6):
                    for dp in range(6):
                        if d == dp == 0:
                            continue
                        a = H.hs_1d_closed_form(d, dp, r, s, nu)
                        b = H.hs_polygon(PT.segment(d, dp), [Fraction(r, s)], nu)
                        if a != b:
                            rep.check("hs-1d", False, f"d={d} dp={dp} r/s={r}/{s} nu={nu}")
    rep.check("hs-1d", True, "d, dp <= 5, s <= 6")


def suite_gnp_matching(rep: RunReport, rng: random.Random):
    done = 0
    while done < 50:
        d, dp = _random_segment(rng)
        p = rng.choice(G.admissible_primes(d, dp, 50))
        N = d + dp
        i = rng.randint(1, min(N, 7))
        for split in G.slope_splits(d, dp, i):
            cost = G.cost_matrix(d if d else dp, dp if d else 0, p, split)
            brute = G.brute_force_assignment(cost)
            try:
                fast = G.min_assignment(cost)[0]
            except G.InfeasibleAssignment:
                fast = None
            rep.check("assignment", fast == brute, f"d={d} dp={dp} p={p} i={i}")
        done += 1


def suite_oracle_identities(rep: RunReport, rng: random.Random):
    for p in (3, 5):
        for _ in range(2):
            # keep the product degree small so the full sum stays within budget
            s1 = _random_segment(rng, 2, length=2)
            s2 = _random_segment(rng, 2, length=2)
            if p in s1 + s2:
                continue
            f1 = LF.random_polynomial_1d(*s1, p, rng)
            f2 = LF.random_polynomial_1d(*s2, p, rng)
            whole = LF.newton_polygon_L(LF.split_sum(f1, f2))
            parts = LF.newton_polygon_L(f1) * LF.newton_polygon_L(f2)
            rep.check("kunneth", whole == parts, f"p={p} {s1} {s2}")
    p = 5
    half = LF.CharacterSpec(p, (Fraction(1, 2),))
    for seg in [(1, 1), (2, 0)]:
        f = LF.random_polynomial_1d(*seg, p, rng)
        lhs = LF.newton_polygon_L(f.substitute_power(2))
        rhs = LF.newton_polygon_L(f) | LF.newton_polygon_L(f, half)
        rep.check("poisson", lhs == rhs, f"p={p} {seg}")


SUITES: dict[str, Callable] = {
    "polygon-algebra": suite_polygon_algebra,
    "hodge-product": suite_hodge_product,
    "decH": suite_decH,
    "lambda": suite_lambda,
    "hs-1d": suite_hs_1d,
    "gnp-matching": suite_gnp_matching,
    "oracle-identities": suite_oracle_identities,
}


def cmd_verify(args) -> RunReport:
    if args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    rep = RunReport("verify", {"suite": args.suite, "seed": args.seed})
    SUITES[args.suite](rep, random.Random(args.seed))
    failed = [c for c in rep.checks if not c["passed"]]
    rep.results["checks_run"] = len(rep.checks)
    rep.results["failed"] = len(failed)
    if failed:
        rep.results["counterexamples"] = failed[:20]
    # keep the report short: collapse passing checks into counts
    summary: dict = {}
    for c in rep.checks:
        summary.setdefault(c["name"], [0, 0])[0 if c["passed"] else 1] += 1
    rep.checks = [
        {"name": k, "passed": v[1] == 0, "detail": f"{v[0]} passed, {v[1]} failed"}
        for k, v in sorted(summary.items())
    ]
    return rep


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=LF.DEFAULT_BUDGET, help="max field points per enumeration pass")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "csv"], default="json")

    ap = argparse.ArgumentParser(prog="newtonhodge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hodge", parents=[common], help="Poincare polynomial and Hodge polygon")
    s.add_argument("--polytope", required=True)
    s.add_argument("--twist", nargs="*", help="coset offsets r/s, one per axis")
    s.set_defaults(func=cmd_hodge)

    s = sub.add_parser("hs", parents=[common], help="Hodge-Stickelberger polygon")
    s.add_argument("--polytope", required=True)
    s.add_argument("--rs", nargs="+", required=True, help="character data r/s, one per axis")
    s.add_argument("--nu", type=int, required=True)
    s.set_defaults(func=cmd_hs)

    s = sub.add_parser("gnp", parents=[common], help="generic Newton polygon of segments")
    s.add_argument("--d", type=int)
    s.add_argument("--dp", type=int, default=0)
    s.add_argument("--product", help="segments 'd,dp;d,dp;...'")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=cmd_gnp)

    s = sub.add_parser("np", parents=[common], help="Newton polygon of L(f, chi) by enumeration")
    s.add_argument("--poly", required=True)
    s.add_argument("--chi", nargs="*", help="character r/s per variable")
    s.add_argument("--polytope", help="polytope file when the support is not on the axes")
    s.set_defaults(func=cmd_np)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("limit-table", parents=[common], help="GNP (or HS) convergence table")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--dp", type=int, default=0)
    s.add_argument("--pmax", type=int, required=True)
    s.add_argument("--s", type=int)
    s.add_argument("--nu", type=int, default=1)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--samples", type=int, default=5)
    s.set_defaults(func=cmd_limit_table)

    s = sub.add_parser("decompose", parents=[common], help="exponent-two decomposition of HP")
    s.add_argument("--polytope", required=True)
    s.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LF.DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except LF.BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, PG.PolygonError, PT.PolytopeError) as exc:
        print(f"math error: {exc}", file=sys.stderr)
        return EXIT_MATH
    sys.stdout.write(rep.render(args.format))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
