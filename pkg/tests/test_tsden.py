from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from igusa.cli import parse_polynomial as P
from igusa.tsden import (
    MINUS_INFINITY,
    AffineExponent,
    candidate_poles,
    denominator,
    pair_factor,
)


class TestPairFactor:
    def test_cusp_weights(self):
        assert pair_factor(2, 3, 1, 1) == AffineExponent(t_power=6, q_power=5)

    def test_zero_weight_contributes_nothing(self):
        assert pair_factor(0, 7, 1, 1) is MINUS_INFINITY
        assert pair_factor(7, 0, 3, 2) is MINUS_INFINITY

    def test_unit_weights(self):
        assert pair_factor(1, 1, 1, 1) == AffineExponent(t_power=1, q_power=2)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            pair_factor(-1, 2, 1, 1)
        with pytest.raises(ValueError):
            pair_factor(2, 2, 0, 1)

    def test_pole_value(self):
        assert pair_factor(2, 3, 1, 1).pole() == Fraction(-5, 6)

    @given(
        m_f=st.integers(min_value=1, max_value=100),
        m_g=st.integers(min_value=1, max_value=100),
        abs_a=st.integers(min_value=1, max_value=100),
        abs_b=st.integers(min_value=1, max_value=100),
    )
    def test_t_power_is_lcm(self, m_f, m_g, abs_a, abs_b):
        exp = pair_factor(m_f, m_g, abs_a, abs_b)
        assert exp.t_power == lcm(m_f, m_g)
        assert (m_f * m_g) % exp.t_power == 0

    @given(
        m_f=st.integers(min_value=1, max_value=100),
        m_g=st.integers(min_value=1, max_value=100),
        abs_a=st.integers(min_value=1, max_value=100),
        abs_b=st.integers(min_value=1, max_value=100),
    )
    def test_symmetric_under_swap(self, m_f, m_g, abs_a, abs_b):
        lhs = pair_factor(m_f, m_g, abs_a, abs_b)
        rhs = pair_factor(m_g, m_f, abs_b, abs_a)
        assert (lhs.q_power, lhs.t_power) == (rhs.q_power, rhs.t_power)


class TestDenominator:
    def test_power_pair(self):
        den = denominator(P("x^2"), P("y^3"))
        assert den.factors() == [(1, 1), (5, 6)]

    def test_square_pair(self):
        den = denominator(P("x^2"), P("y^2"))
        assert den.factors() == [(1, 1), (2, 2)]

    def test_linear_pair(self):
        den = denominator(P("x"), P("y"))
        assert den.factors() == [(1, 1), (2, 1)]

    def test_two_variable_summand(self):
        den = denominator(P("x^2 + z^2"), P("y^3"))
        assert den.factors() == [(1, 1), (8, 6)]
        assert sum(1 for pf in den.pairs if pf.inert) == 2
        active = [pf for pf in den.pairs if not pf.inert]
        assert len(active) == 1
        assert active[0].a == (1, 1) and active[0].b == (1,)

    def test_variable_collision_rejected(self):
        with pytest.raises(ValueError):
            denominator(P("x^2"), P("x^3"))

    def test_noncritical_warning_attached(self):
        den = denominator(P("x^2 + 2x*y + y^2"), P("z"), check_mode="exact_small")
        assert den.noncrit_warnings
        assert "not certified" in den.noncrit_warnings[0]
        clean = denominator(P("x^2"), P("y^3"), check_mode="exact_small")
        assert not clean.noncrit_warnings

    def test_as_dict_shape(self):
        d = denominator(P("x^2 + z^2"), P("y^3")).as_dict()
        assert d["universal"] == {"qpow": 1, "tpow": 1}
        assert d["poles"] == ["-4/3", "-1"]
        inert = [e for e in d["factors"] if e["inert"]]
        assert all(e["qpow"] is None and e["tpow"] is None for e in inert)
        active = [e for e in d["factors"] if not e["inert"]]
        assert active == [{"a": [1, 1], "b": [1], "qpow": 8, "tpow": 6, "inert": False}]

    def test_symmetry_of_pair_multiset(self):
        for ft, gt in [("x^2", "y^3"), ("x^2 + z^2", "y^3"), ("x + z^4", "y^2")]:
            f, g = P(ft), P(gt)
            ab = denominator(f, g)
            ba = denominator(g, f)
            lhs = sorted(
                (pf.exponent.q_power, pf.exponent.t_power)
                for pf in ab.pairs
                if not pf.inert
            )
            rhs = sorted(
                (pf.exponent.q_power, pf.exponent.t_power)
                for pf in ba.pairs
                if not pf.inert
            )
            assert lhs == rhs


class TestCandidatePoles:
    def test_cusp_poles(self):
        poles = candidate_poles(P("x^2"), P("y^3"))
        assert set(poles.sorted()) == {Fraction(-1), Fraction(-5, 6)}
        assert poles.as_strings() == ["-1", "-5/6"]

    def test_coincident_pole_collapses(self):
        poles = candidate_poles(P("x^2"), P("y^2"))
        assert set(poles.sorted()) == {Fraction(-1)}

    def test_linear_poles(self):
        poles = candidate_poles(P("x"), P("y"))
        assert set(poles.sorted()) == {Fraction(-1), Fraction(-2)}

    def test_always_contains_minus_one(self):
        for ft, gt in [("x^5", "y^7"), ("x^2 + z^3", "y^4"), ("x", "y^9")]:
            assert Fraction(-1) in set(candidate_poles(P(ft), P(gt)).sorted())

    def test_size_bound(self):
        f, g = P("x^2 + z^2"), P("y^3")
        den = denominator(f, g)
        poles = den.candidate_poles()
        assert len(poles.sorted()) <= len(den.pairs) + 1
        # the largest candidate pole is minus the smallest factor ratio
        ratios = [Fraction(a, b) for a, b in den.factors()]
        assert max(poles.sorted()) == -min(ratios)
