from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from newtonhodge.polytope import (
    DirectSumPolytope,
    PolytopeError,
    Segment1D,
    denominator,
    direct_sum,
    epsilon_set,
    fundamental_points,
    half_points,
    lattice_volume,
    nondegenerate_1d,
    segment,
    smith_invariants,
    solve,
    weight,
)

segs = st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda s: s != (0, 0))


def test_degenerate_segment_rejected():
    with pytest.raises(PolytopeError):
        Segment1D(0, 0)


def test_singular_basis_rejected():
    with pytest.raises(PolytopeError):
        DirectSumPolytope.from_segments([(1, 0), (1, 0)], [[1, 2], [2, 4]])


class TestDirectSum:
    def test_identity_blocks(self):
        P = direct_sum(segment(2), segment(2))
        assert P.n == 2 and P.is_standard
        assert P.segments == (Segment1D(2, 0), Segment1D(2, 0))

    def test_segments_concatenate(self):
        P = direct_sum(segment(2, 1), segment(1, 3))
        assert [(s.d, s.dp) for s in P.segments] == [(2, 1), (1, 3)]

    @given(segs, segs)
    def test_volume_multiplies(self, a, b):
        assert lattice_volume(direct_sum(segment(*a), segment(*b))) == lattice_volume(segment(*a)) * lattice_volume(
            segment(*b)
        )


class TestWeight:
    def test_one_variable(self):
        assert weight(segment(2, 3), [5]) == F(5, 2)

    def test_additive(self):
        assert weight(direct_sum(segment(2), segment(3)), [1, 2]) == F(7, 6)

    def test_off_cone(self):
        assert weight(segment(2), [-1]) is None

    def test_general_basis(self):
        P = DirectSumPolytope.from_segments([(1, 0), (1, 0)], [[1, 1], [1, -1]])
        # (1, 0) = (f1 + f2)/2
        assert weight(P, [1, 0]) == 1

    @given(segs, segs, st.integers(-6, 6), st.integers(-6, 6), st.integers(1, 4))
    def test_homogeneous_and_additive(self, a, b, u, v, lam):
        A, B = segment(*a), segment(*b)
        wa, wb = weight(A, [u]), weight(B, [v])
        w = weight(direct_sum(A, B), [u, v])
        if wa is None or wb is None:
            assert w is None
        else:
            assert w == wa + wb
            assert weight(direct_sum(A, B), [lam * u, lam * v]) == lam * w


class TestDenominator:
    def test_segment(self):
        assert denominator(segment(2, 1)) == 2

    def test_twisted(self):
        assert denominator(segment(1, 1), [F(1, 2)]) == 2

    def test_sum(self):
        assert denominator(direct_sum(segment(2), segment(3))) == 6

    @given(segs, segs)
    def test_lcm_of_factors(self, a, b):
        from math import lcm

        A, B = segment(*a), segment(*b)
        assert denominator(direct_sum(A, B)) == lcm(denominator(A), denominator(B))

    def test_cancellation(self):
        # 1/2 + 1/2 on two axes: every total weight is an integer
        P = direct_sum(segment(1), segment(1))
        assert denominator(P, [F(1, 2), F(1, 2)]) == 1


class TestVolume:
    def test_segment(self):
        assert lattice_volume(segment(2, 1)) == 3

    def test_triangle(self):
        assert lattice_volume(direct_sum(segment(2), segment(3))) == 6

    def test_scaled_basis(self):
        assert lattice_volume(DirectSumPolytope.from_segments([(1, 1)], [[2]])) == 4


class TestEpsilon:
    def test_two(self):
        assert epsilon_set([[2]]) == [(0,), (1,)]

    def test_identity(self):
        assert epsilon_set([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [(0, 0, 0)]

    def test_rotation(self):
        assert epsilon_set([[1, 1], [1, -1]]) == [(0, 0), (1, 1)]

    def test_exponent_four_rejected(self):
        with pytest.raises(PolytopeError, match="quotient not of exponent 2"):
            epsilon_set([[4]])

    def test_half_points(self):
        assert half_points([[2]], [(1,)]) == [(1,)]
        assert half_points([[1, 1], [1, -1]], [(0, 0), (1, 1)]) == [(0, 0), (1, 0)]

    def test_half_points_in_fundamental_domain(self):
        M = [[2, 0], [0, 2]]
        pts = half_points(M, epsilon_set(M))
        assert len(set(pts)) == 4
        for u in pts:
            assert all(0 <= x < 1 for x in solve(M, u))

    def test_smith(self):
        assert smith_invariants([[1, 1], [1, -1]]) == [1, 2]


def test_fundamental_points_count():
    M = [[2, 1], [1, 3]]
    assert len(fundamental_points(M)) == 5


class TestNondegenerate:
    def test_good(self):
        assert nondegenerate_1d(3, 0, 1, None, 5)

    def test_p_divides(self):
        assert not nondegenerate_1d(3, 0, 1, None, 3)

    def test_two_sided(self):
        assert nondegenerate_1d(2, 1, 1, 1, 7)

    def test_missing_coefficient(self):
        assert not nondegenerate_1d(2, 1, 1, 0, 7)


def test_json_roundtrip(tmp_path):
    P = DirectSumPolytope.from_segments([(1, 0), (2, 1)], [[1, 1], [1, -1]])
    assert DirectSumPolytope.from_json(P.to_json()) == P
    path = tmp_path / "p.json"
    import json

    path.write_text(json.dumps(P.to_json()))
    assert DirectSumPolytope.load(path) == P


def test_malformed_json():
    with pytest.raises(PolytopeError):
        DirectSumPolytope.from_json({"segments": [{"d": 1}]})
