"""Tests for the angular density and its entropic moments."""

import math

import mpmath
import numpy as np
import pytest

from cavion.angular import (
    AngularFactor,
    angular_factor,
    angular_moment,
    angular_shannon,
    chi,
)
from cavion.errors import ValidationError

LN_4PI = math.log(4.0 * math.pi)
# closed form for l=1, m=0: chi = (3/2) t^2, omega^lam = (3/2)^lam * 2/(2 lam + 1)
OMEGA_L1_3_5 = 1.15947681875071894
SHANNON_L1 = 2.09907862496784777
SHANNON_L2 = 2.04112500613392862


def mp_polar_moment(l, m, lam):
    """Independent oracle: adaptive quadrature of chi^lam on [-1, 1].

    Splitting the interval at the density zeros only speeds convergence; the
    quadrature value itself is independent of the implementation under test.
    """
    from cavion.angular import _plm_interior_zeros

    mpmath.mp.dps = 30
    f = lambda t: mpmath.mpf(float(chi(l, m, np.array([float(t)]))[0])) ** lam
    cuts = [-1.0, *_plm_interior_zeros(l, m), 1.0]
    total = mpmath.mpf(0)
    for a, b in zip(cuts[:-1], cuts[1:]):
        total += mpmath.quad(f, [a, b])
    return float(total)


class TestChi:
    @pytest.mark.parametrize("l,m", [(0, 0), (1, 0), (2, 0), (3, 1), (5, 2), (9, 0)])
    def test_normalized(self, l, m):
        assert abs(angular_moment(l, m, 1.0) - 1.0) < 1e-12

    def test_l0_uniform(self):
        t = np.linspace(-1, 1, 7)
        assert np.allclose(chi(0, 0, t), 0.5, atol=1e-15)

    def test_l1_quadratic(self):
        t = np.linspace(-1, 1, 11)
        assert np.allclose(chi(1, 0, t), 1.5 * t * t, atol=1e-14)

    def test_negative_m_matches_positive(self):
        t = np.linspace(-0.9, 0.9, 13)
        assert np.allclose(chi(4, -3, t), chi(4, 3, t), rtol=1e-14)

    def test_invalid_lm(self):
        with pytest.raises(ValidationError):
            chi(2, 3, np.array([0.0]))
        with pytest.raises(ValidationError):
            angular_moment(-1, 0, 2.0)


class TestAngularMoment:
    @pytest.mark.parametrize("lam", [0.6, 1.0, 2.0, 3.0, 0.500001])
    def test_l0_closed_form(self, lam):
        assert angular_moment(0, 0, lam) == pytest.approx(2.0 ** (1.0 - lam), rel=1e-13)

    @pytest.mark.parametrize(
        "lam,expected",
        [(2.0, 0.9), (3.0, (1.5) ** 3 * 2.0 / 7.0), (0.6, OMEGA_L1_3_5)],
    )
    def test_l1_closed_form(self, lam, expected):
        assert angular_moment(1, 0, lam) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("l,m,lam", [(2, 0, 0.6), (2, 1, 0.6), (3, 2, 3.0), (5, 0, 2.0)])
    def test_against_adaptive_quadrature(self, l, m, lam):
        ours = angular_moment(l, m, lam)
        ref = mp_polar_moment(l, m, lam)
        assert ours == pytest.approx(ref, rel=1e-9)

    def test_order_validation(self):
        with pytest.raises(ValidationError):
            angular_moment(1, 0, 0.0)
        with pytest.raises(ValidationError):
            angular_moment(1, 0, -0.5)

    def test_cache_returns_same_object(self):
        f1 = angular_factor(3, 1)
        f2 = angular_factor(3, 1)
        assert f1 is f2
        v1 = angular_moment(3, 1, 2.0)
        assert f1.moment_cache[2.0] == v1


class TestAngularShannon:
    def test_s_state_is_ln_4pi(self):
        assert angular_shannon(0, 0) == pytest.approx(LN_4PI, abs=1e-13)

    def test_l1_closed_form(self):
        # S = 2/3 - ln(3/2) + ln(2 pi)
        expected = 2.0 / 3.0 - math.log(1.5) + math.log(2.0 * math.pi)
        assert angular_shannon(1, 0) == pytest.approx(expected, abs=1e-12)
        assert angular_shannon(1, 0) == pytest.approx(SHANNON_L1, abs=1e-12)

    def test_l2_frozen_value(self):
        assert angular_shannon(2, 0) == pytest.approx(SHANNON_L2, abs=1e-12)

    def test_order_one_limit_brackets_shannon(self):
        # R_ang(lam) = ln(2 pi) + ln(omega)/(1 - lam) tends to S_ang as lam -> 1
        for l, m in [(1, 0), (4, 2)]:
            s = angular_shannon(l, m)
            d = 1e-4
            vals = []
            for lam in (1.0 - d, 1.0 + d):
                w = angular_moment(l, m, lam)
                vals.append(math.log(2.0 * math.pi) + math.log(w) / (1.0 - lam))
            assert min(vals) <= s + 1e-7
            assert max(vals) >= s - 1e-7
            assert 0.5 * (vals[0] + vals[1]) == pytest.approx(s, abs=1e-5)

    def test_shannon_against_adaptive_quadrature(self):
        l, m = 3, 0
        mpmath.mp.dps = 25
        f = lambda t: -chi(l, m, np.array([float(t)]))[0] * math.log(
            max(chi(l, m, np.array([float(t)]))[0], 1e-300)
        )
        zs = np.polynomial.legendre.leggauss(l)[0]
        ref = float(mpmath.quad(f, [-1.0, *sorted(zs.tolist()), 1.0]))
        assert angular_shannon(l, m) == pytest.approx(ref + math.log(2 * math.pi), abs=1e-9)


class TestAngularFactor:
    def test_fields(self):
        f = angular_factor(2, 1)
        assert isinstance(f, AngularFactor)
        assert (f.l, f.m) == (2, 1)
        assert f.shannon_angular == angular_shannon(2, 1)
