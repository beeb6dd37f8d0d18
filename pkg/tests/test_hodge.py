from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from newtonhodge import hodge as H
from newtonhodge.gnp import hp_1d
from newtonhodge.polygon import ConvexPolygon, dominates
from newtonhodge.polytope import DirectSumPolytope, direct_sum, segment


def poly(*slopes):
    return ConvexPolygon.from_slopes(F(s) for s in slopes)


segs = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda s: s != (0, 0))
offsets = st.fractions(min_value=0, max_value=F(5, 6), max_denominator=6)


class TestGradedDims:
    def test_half_line(self):
        assert H.graded_dims(segment(2), None, 4) == {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}

    def test_twisted_line(self):
        assert H.graded_dims(segment(1, 1), [F(1, 2)], 5) == {1: 2, 3: 2, 5: 2}

    def test_origin_only(self):
        assert H.graded_dims(direct_sum(segment(2), segment(3)), None, 0) == {0: 1}


class TestPoincare:
    def test_half_line(self):
        pp = H.poincare_polynomial(segment(2))
        assert (pp.D, pp.coeffs) == (2, (1, 1, 0))

    def test_square(self):
        pp = H.poincare_polynomial(direct_sum(segment(2), segment(2)))
        assert (pp.D, pp.coeffs[:3]) == (2, (1, 2, 1))

    def test_twisted(self):
        pp = H.poincare_polynomial(segment(1, 1), [F(1, 2)])
        assert pp.coeffs == (0, 2, 0)
        assert pp.to_json() == {"D": 2, "coeffs": [0, 2, 0]}

    @given(st.lists(segs, min_size=1, max_size=3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_invariants(self, ss, data):
        P = DirectSumPolytope.from_segments(ss)
        tw = [data.draw(offsets) for _ in ss]
        pp = H.poincare_polynomial(P, tw)
        assert pp(1) == H.lattice_volume(P)
        assert all(c >= 0 for c in pp.coeffs)
        assert pp.degree <= P.n * pp.D


class TestHodgePolygon:
    def test_segment(self):
        assert H.hodge_polygon(segment(2, 1)) == poly(0, "1/2", 1)

    def test_twisted(self):
        assert H.hodge_polygon(segment(1, 1), [F(1, 2)]) == poly("1/2", "1/2")

    def test_triangle(self):
        assert H.hodge_polygon(direct_sum(segment(2), segment(3))) == poly(0, "1/3", "1/2", "2/3", "5/6", "7/6")

    @given(segs, segs, offsets, offsets)
    @settings(max_examples=50, deadline=None)
    def test_product_twisted(self, a, b, ta, tb):
        A, B = segment(*a), segment(*b)
        lhs = H.hodge_polygon(direct_sum(A, B), [ta, tb])
        assert lhs == H.hodge_polygon(A, [ta]) * H.hodge_polygon(B, [tb])

    @given(segs, offsets)
    @settings(max_examples=50, deadline=None)
    def test_axis_closed_form(self, s, x):
        assert H.hodge_polygon(segment(*s), [x]) == H.axis_polygon(segment(*s).segments[0], x)

    def test_general_basis(self):
        P = DirectSumPolytope.from_segments([(1, 1)], [[2]])
        assert H.hodge_polygon(P) == poly(0, "1/2", "1/2", 1)


class TestLambda:
    def test_examples(self):
        assert H.lambda_stickelberger(1, 3, 2) == F(1, 2)
        assert H.lambda_stickelberger(1, 3, 1) == F(1, 3)
        assert H.lambda_stickelberger(0, 5, 2) == 0

    def test_not_unit(self):
        with pytest.raises(H.HodgeError):
            H.lambda_stickelberger(1, 4, 2)

    def test_digit_sum(self):
        # p = 5, s = 3, q' = 25: (24 * 1/3) = 8 = 13_5, digit sum 4, / (2 * 4)
        assert H.lambda_digit_sum(1, 3, 5) == F(1, 2)


class TestHS:
    def test_gauss_sum_slope(self):
        assert H.hs_polygon(segment(1), [F(1, 2)], 1) == poly("1/2")

    def test_kloosterman_quadratic(self):
        for nu in (1, 3, 5):
            assert H.hs_polygon(segment(1, 1), [F(1, 2)], nu) == poly("1/2", "1/2")

    def test_orbit_of_length_two(self):
        hs = H.hs_polygon(segment(3, 2), [F(1, 3)], 2)
        assert hs == H.hs_1d_closed_form(3, 2, 1, 3, 2)
        assert hs == poly("1/6", "1/4", "1/2", "3/4", "5/6")

    def test_sorted_average_lies_below(self):
        # the slope-wise sorted average of the orbit polygons is a lower bound
        for d, dp, s, nu in [(3, 2, 3, 2), (1, 2, 5, 2), (4, 1, 5, 3)]:
            P = segment(d, dp)
            for r in range(1, s):
                hs = H.hs_polygon(P, [F(r, s)], nu)
                assert dominates(hs, H.orbit_average(P, [F(r, s)], nu))

    def test_sorted_average_differs(self):
        P = segment(3, 2)
        assert H.orbit_average(P, [F(1, 3)], 2) != H.hs_polygon(P, [F(1, 3)], 2)

    def test_closed_form_examples(self):
        assert H.hs_1d_closed_form(1, 0, 1, 2, 1) == poly("1/2")
        assert H.hs_1d_closed_form(2, 1, 1, 2, 1) == poly("1/4", "1/2", "3/4")

    def test_trivial_character(self):
        assert H.hs_1d_closed_form(3, 0, 0, 1, 1) == hp_1d(3, 0)
        assert H.hs_polygon(segment(3), [F(0)], 1) == hp_1d(3, 0)

    def test_two_variables_product(self):
        A, B = segment(2, 1), segment(1, 2)
        rs = [F(1, 5), F(2, 5)]
        hs = H.hs_polygon(direct_sum(A, B), rs, 2)
        assert hs == H.hs_polygon(A, rs[:1], 2) * H.hs_polygon(B, rs[1:], 2)

    def test_prime_independence(self):
        P = direct_sum(segment(2, 1), segment(3))
        rs = [F(1, 3), F(2, 3)]
        ref = H.hs_polygon(P, rs, 2)
        for p in (5, 11, 17):
            assert H.hs_polygon_from_prime(P, rs, p) == ref
        assert H.hs_polygon_from_prime(P, rs, 5, a=4) == ref

    def test_nonunimodular_orbit_rejected(self):
        P = DirectSumPolytope.from_segments([(1, 1)], [[2]])
        with pytest.raises(H.HodgeError):
            H.hs_polygon(P, [F(1, 3)], 2)

    def test_bad_nu(self):
        with pytest.raises(H.HodgeError):
            H.hs_polygon(segment(2), [F(1, 4)], 2)


class TestDecH:
    def test_scaled_segment(self):
        base, twisted = H.decH_decomposition(DirectSumPolytope.from_segments([(1, 1)], [[2]]))
        assert base == poly(0, 1)
        assert twisted == [poly("1/2", "1/2")]

    def test_identity(self):
        base, twisted = H.decH_decomposition(segment(2, 1))
        assert twisted == []
        assert base == H.hodge_polygon(segment(2, 1))

    def test_rotation(self):
        P = DirectSumPolytope.from_segments([(1, 0), (1, 0)], [[1, 1], [1, -1]])
        base, twisted = H.decH_decomposition(P)
        assert (base | twisted[0]) == H.hodge_polygon(P)
