"""Tests for entropic moments and the Renyi/Shannon/Tsallis/Onicescu measures.

High-precision reference values quoted below were produced by an independent
30-digit evaluation of the closed-form confined eigenfunctions (confluent
hypergeometric form, arbitrary-precision quadrature), or by hand from the
closed-form free-ion densities; each is quoted with the tolerance its
derivation supports.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from cavion.angular import angular_factor, chi
from cavion.entropy import (
    DEFAULT_ORDERS,
    EntropicOrders,
    compute_all,
    onicescu,
    radial_moment,
    renyi,
    renyi_sum,
    scale_measures,
    shannon,
    tsallis,
)
from cavion.errors import ValidationError
from cavion.momentum import fha_momentum, to_momentum
from cavion.solver import Confinement, QuantumNumbers, fha_radial, solve_state
from cavion.special import composite_rule, graded_edges

QN_1S = QuantumNumbers(1, 0)
QN_2P = QuantumNumbers(2, 1)
QN_3D = QuantumNumbers(3, 2)


def conf(rc, Z=1.0):
    return Confinement(Z=Z, rc=rc)


class TestEntropicOrders:
    def test_defaults_are_exact_rationals(self):
        assert DEFAULT_ORDERS.alpha == Fraction(3, 5)
        assert DEFAULT_ORDERS.beta == Fraction(3)
        assert isinstance(DEFAULT_ORDERS.alpha, Fraction)
        assert isinstance(DEFAULT_ORDERS.beta, Fraction)

    def test_decimal_input_becomes_exact_rational(self):
        orders = EntropicOrders(0.6, 3)
        assert orders.alpha == Fraction(3, 5)
        assert orders.beta == Fraction(3)
        orders = EntropicOrders("3/5", "3")
        assert orders.alpha == Fraction(3, 5)

    def test_conjugacy_enforced(self):
        with pytest.raises(ValidationError):
            EntropicOrders(Fraction(7, 10), 3)
        with pytest.raises(ValidationError):
            EntropicOrders(2, 3)

    def test_degenerate_orders_rejected(self):
        with pytest.raises(ValidationError):
            EntropicOrders(1, 1)
        with pytest.raises(ValidationError):
            EntropicOrders(Fraction(-3, 5), Fraction(3, 11))

    def test_conjugate_pair(self):
        orders = EntropicOrders.conjugate_pair(Fraction(3, 5))
        assert (orders.alpha, orders.beta) == (Fraction(3, 5), Fraction(3))
        orders = EntropicOrders.conjugate_pair(2)
        assert orders.beta == Fraction(2, 3)
        with pytest.raises(ValidationError):
            EntropicOrders.conjugate_pair(Fraction(1, 2))
        with pytest.raises(ValidationError):
            EntropicOrders.conjugate_pair(1)


class TestRadialMoments:
    def test_order_one_recovers_norm(self):
        rs = solve_state(QN_2P, conf(1.0))
        assert radial_moment(rs, 1) == pytest.approx(1.0, abs=1e-11)
        ms = to_momentum(rs)
        assert radial_moment(ms, 1) == pytest.approx(1.0, abs=1e-11)
        for l, m in [(0, 0), (1, 0), (3, 2)]:
            assert angular_factor(l, m).moment(1.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("lam", [0.6, 1.7, 2.0])
    def test_free_1s_closed_form(self, lam):
        # R_10 = 2 e^{-r}:  int R^{2 lam} r^2 dr = 4^lam / (4 lam^3)
        rs = fha_radial(QN_1S)
        exact = 4.0**lam / (4.0 * lam**3)
        assert radial_moment(rs, lam) == pytest.approx(exact, rel=1e-11)

    @pytest.mark.parametrize("lam", [0.6, 1.7, 2.0])
    def test_free_2p_closed_form(self, lam):
        # R_21 = r e^{-r/2} / (2 sqrt(6)):
        # int R^{2 lam} r^2 dr = 24^{-lam} Gamma(2 lam + 3) / lam^{2 lam + 3}
        rs = fha_radial(QN_2P)
        exact = 24.0**-lam * math.gamma(2 * lam + 3) / lam ** (2 * lam + 3)
        assert radial_moment(rs, lam) == pytest.approx(exact, rel=1e-11)

    def test_validation(self):
        rs = fha_radial(QN_1S)
        with pytest.raises(ValidationError):
            radial_moment(rs, 0.0)
        with pytest.raises(ValidationError):
            radial_moment("not a density", 2.0)


class TestRenyiPosition:
    # Independent 30-digit evaluations of the confined closed-form states.
    @pytest.mark.parametrize(
        "qn,rc,expected",
        [
            (QN_2P, 0.1, -6.168883574026822),
            (QN_2P, 1.0, 0.7217545776624681),
            (QN_3D, 1.0, 0.784088792348095),
        ],
    )
    def test_high_precision_reference(self, qn, rc, expected):
        m = compute_all(qn, conf(rc))
        assert m.R_r == pytest.approx(expected, abs=5e-11)

    @pytest.mark.parametrize(
        "qn,rc,expected",
        [
            (QN_2P, 1.0, 0.8311099130711334),
            (QN_3D, 1.0, 0.8590201065201166),
        ],
    )
    def test_onicescu_high_precision_reference(self, qn, rc, expected):
        m = compute_all(qn, conf(rc))
        assert m.E_r == pytest.approx(expected, rel=5e-10)

    def test_free_2p_renyi_closed_form(self):
        m = compute_all(QN_2P, conf(math.inf))
        assert m.R_r == pytest.approx(7.925776675483238, abs=5e-11)

    def test_api_validation(self):
        with pytest.raises(ValidationError):
            renyi(1.0, 1, 0, 1.0)
        with pytest.raises(ValidationError):
            renyi(-0.5, 1, 0, 2.0)
        assert renyi_sum(DEFAULT_ORDERS, 2.0, 3.5) == 5.5


class TestFreeIonLimits:
    # (R_r, R_p, R_t), (T_r, T_p, T_t), (S_r, S_p, S_t), (E_r, E_p, E_t)
    FREE = {
        "2p": {
            "R": (7.925776675482, -0.9736503771629, 6.952126298319),
            "T": (57.037204453034, -3.0048705041661, -171.38941330101483),
            "S": (7.264897118452, 0.042420799485, 7.307317917937),
            "E": (0.001398822737, 1.975763081024, 0.002763742330),
        },
        "3d": {
            "R": (9.926008594642, -2.311283609195, 7.614724985446),
            # 3d Tsallis references are the independent 30-digit closed-form
            # values: T_r = (omega - 1)/(1 - alpha) with
            # omega = exp((1 - alpha) R_r) amplifies any omega error by a
            # factor omega ~ 53, so T_r needs more headroom than R_r.
            "T": (130.0147777944414, -50.377462107980, -6549.8145418169),
            "S": (9.345634202074, -1.232717244109, 8.112916957965),
            "E": (0.000172694164, 7.1005342704468, 0.0012262208417),
        },
    }

    @pytest.mark.parametrize("label", ["2p", "3d"])
    def test_footnote_triples(self, label):
        m = compute_all(QuantumNumbers.from_label(label), conf(math.inf))
        ref = self.FREE[label]
        for fam in "RTSE":
            got = tuple(getattr(m, f"{fam}_{sp}") for sp in ("r", "p", "t"))
            scale = max(1.0, abs(ref[fam][0]))
            assert got[0] == pytest.approx(ref[fam][0], abs=1e-8 * scale), fam
            scale = max(1.0, abs(ref[fam][1]), abs(ref[fam][2]))
            assert got[1] == pytest.approx(ref[fam][1], abs=1e-6 * scale), fam
            assert got[2] == pytest.approx(ref[fam][2], abs=1e-6 * scale), fam

    def test_free_1s_onicescu_closed_form(self):
        # E_r(1s) = Z^3 / (8 pi); momentum side analytic too
        m = compute_all(QN_1S, conf(math.inf))
        assert m.E_r == pytest.approx(1.0 / (8.0 * math.pi), rel=1e-10)
        m5 = compute_all(QN_1S, conf(math.inf, Z=5.0))
        assert m5.E_r == pytest.approx(125.0 / (8.0 * math.pi), rel=1e-10)
        assert m5.E_t == pytest.approx(m.E_t, rel=1e-10)


class TestTsallisPlateau:
    # With beta = 3, extreme confinement drives omega^beta_p -> 0, so
    # T_p -> 1/(beta - 1) = 1/2 from below.
    def test_plateau_values(self):
        assert compute_all(QN_2P, conf(0.1)).T_p == pytest.approx(0.4999999999, abs=1e-8)
        assert compute_all(QN_2P, conf(1.0)).T_p == pytest.approx(0.4999964094, abs=1e-7)
        assert compute_all(QN_3D, conf(0.1)).T_p == pytest.approx(0.499999999998, abs=1e-8)

    def test_plateau_is_one_sided(self):
        for rc in (0.1, 0.5, 1.0):
            t_p = compute_all(QN_2P, conf(rc)).T_p
            assert t_p < 0.5

    def test_algebra(self):
        t_r, t_p, t_t = tsallis(0.25, 4.0, DEFAULT_ORDERS, 1.0)
        assert t_r == pytest.approx((1.0 - 0.25) / (0.6 - 1.0))
        assert t_p == pytest.approx((1.0 - 4.0) / (3.0 - 1.0))
        assert t_t == pytest.approx(t_r * t_p)
        e_r, e_p, e_t = onicescu(0.25, 4.0, 2.0)
        assert (e_r, e_p) == (8.0 * 0.25, 4.0 / 8.0)
        assert e_t == e_r * e_p


class TestShannon:
    def test_confined_2p_against_literature(self):
        m = compute_all(QN_2P, conf(0.2))
        assert m.S_r == pytest.approx(-4.3126791236, abs=1e-8)
        assert m.S_p == pytest.approx(11.3396511782, abs=1e-5)
        assert m.S_t == pytest.approx(7.0269720545, abs=1e-5)

    def test_confined_3d_against_literature(self):
        m = compute_all(QN_3D, conf(1.0))
        assert m.S_r == pytest.approx(0.5452929905, abs=1e-8)
        assert m.S_p == pytest.approx(7.098078228, abs=1e-5)

    def test_operation_matches_compute_all(self):
        rs = solve_state(QN_2P, conf(0.5))
        ms = to_momentum(rs)
        s_r, s_p, s_t = shannon(rs, ms, 1, 0)
        m = compute_all(QN_2P, conf(0.5))
        assert s_r == pytest.approx(m.S_r, abs=1e-12)
        assert s_p == pytest.approx(m.S_p, abs=1e-12)
        assert s_t == s_r + s_p

    def test_entropy_sum_bound(self):
        # S_t >= 3 (1 + ln pi) for every state (uncertainty-type bound).
        bound = 3.0 * (1.0 + math.log(math.pi))
        for qn, rc in [
            (QN_2P, 0.1),
            (QN_2P, 15.0),
            (QN_3D, 7.5),
            (QN_1S, 0.4),
            (QuantumNumbers(10, 0), 0.1),
        ]:
            assert compute_all(qn, conf(rc)).S_t > bound


class TestShannonIsRenyiLimit:
    @pytest.mark.parametrize("rc", [1.0])
    def test_bracketing_and_limit_both_spaces(self, rc):
        rs = solve_state(QN_2P, conf(rc))
        ms = to_momentum(rs)
        h = 1e-4
        m = compute_all(QN_2P, conf(rc))
        for density, s_ref in ((rs, m.S_r), (ms, m.S_p)):
            lo = renyi(radial_moment(density, 1.0 + h), 1, 0, 1.0 + h)
            hi = renyi(radial_moment(density, 1.0 - h), 1, 0, 1.0 - h)
            assert lo <= s_ref <= hi  # R^lam decreases with lam
            assert 0.5 * (lo + hi) == pytest.approx(s_ref, abs=1e-5)


class TestOrderTwoConsistency:
    def test_position_identities(self):
        orders = EntropicOrders(2, Fraction(2, 3))
        m = compute_all(QN_2P, conf(1.0), orders)
        assert m.R_r == pytest.approx(-math.log(m.E_r), abs=1e-12)
        assert m.T_r == pytest.approx(1.0 - m.E_r, abs=1e-12)

    def test_momentum_identities(self):
        orders = EntropicOrders(Fraction(2, 3), 2)
        m = compute_all(QN_2P, conf(1.0), orders)
        assert m.R_p == pytest.approx(-math.log(m.E_p), abs=1e-12)
        assert m.T_p == pytest.approx(1.0 - m.E_p, abs=1e-12)


class TestChargeScaling:
    def test_round_trip_direct_vs_scaled(self):
        direct = compute_all(QN_1S, conf(1.0, Z=2.0))
        base = compute_all(QN_1S, conf(2.0))
        scaled = scale_measures(base, 2.0)
        assert scaled.rc == pytest.approx(1.0)
        assert scaled.Z == 2.0
        for name in (
            "R_r", "R_p", "R_t", "S_r", "S_p", "S_t",
            "T_r", "T_p", "T_t", "E_r", "E_p", "E_t",
        ):
            assert getattr(direct, name) == pytest.approx(
                getattr(scaled, name), abs=1e-8
            ), name

    def test_composites_are_bit_identical(self):
        base = compute_all(QN_2P, conf(2.5))
        scaled = scale_measures(base, 5.0)
        assert scaled.R_t == base.R_t
        assert scaled.S_t == base.S_t
        assert scaled.T_t == base.T_t
        assert scaled.E_t == base.E_t

    def test_linear_shifts(self):
        base = compute_all(QN_2P, conf(2.5))
        scaled = scale_measures(base, 5.0)
        shift = 3.0 * math.log(5.0)
        assert scaled.R_r == pytest.approx(base.R_r - shift, abs=1e-12)
        assert scaled.R_p == pytest.approx(base.R_p + shift, abs=1e-12)
        assert scaled.S_r == pytest.approx(base.S_r - shift, abs=1e-12)
        assert scaled.S_p == pytest.approx(base.S_p + shift, abs=1e-12)
        assert scaled.E_r == pytest.approx(125.0 * base.E_r, rel=1e-14)
        assert scaled.E_p == pytest.approx(base.E_p / 125.0, rel=1e-14)

    def test_validation_and_identity(self):
        base = compute_all(QN_1S, conf(2.0))
        assert scale_measures(base, 1.0) is base
        with pytest.raises(ValidationError):
            scale_measures(base, 0.0)
        direct = compute_all(QN_1S, conf(1.0, Z=2.0))
        with pytest.raises(ValidationError):
            scale_measures(direct, 3.0)


def brute_force_position(rs, lam=None):
    """Plain 2-D tensor quadrature of the full position-space density.

    Integrates rho(r, t)^lam (or -rho ln rho when lam is None) with
    rho = R(r)^2 chi(t) / (2 pi) over r in [0, r_end], t = cos(theta) in
    [-1, 1], without using the radial x polar factorization under test.
    """
    r_end = rs._r_end
    r_parts = [np.linspace(0.0, r_end, 122)]
    step = r_end / 121.0
    r_parts.append(graded_edges(r_end - step, r_end, "right", 30))
    r_parts.append(graded_edges(0.0, step, "left", 30))
    r_rule = composite_rule(np.unique(np.concatenate(r_parts)), 12)

    t_parts = [np.linspace(-1.0, 1.0, 82)]
    if rs.qn.l == 1:  # chi ~ t^2 kinks rho^lam at t = 0
        t_parts.append(graded_edges(-2.0 / 81.0, 0.0, "right", 30))
        t_parts.append(graded_edges(0.0, 2.0 / 81.0, "left", 30))
    t_rule = composite_rule(np.unique(np.concatenate(t_parts)), 12)

    rho = np.outer(rs.R(r_rule.nodes) ** 2, chi(rs.qn.l, 0, t_rule.nodes))
    rho /= 2.0 * math.pi
    if lam is None:
        f = np.where(rho > 0.0, -rho * np.log(np.where(rho > 0.0, rho, 1.0)), 0.0)
    else:
        f = rho**lam
    inner = f @ t_rule.weights
    return 2.0 * math.pi * float(np.dot(r_rule.weights, inner * r_rule.nodes**2))


class TestFactoredAgainstBruteForce:
    @pytest.mark.parametrize("label", ["1s", "2p"])
    @pytest.mark.parametrize("rc", [0.5, 5.0])
    def test_moment_and_shannon(self, label, rc):
        qn = QuantumNumbers.from_label(label)
        rs = solve_state(qn, conf(rc))
        m = compute_all(qn, conf(rc))
        omega_factored = math.exp((1.0 - 0.6) * m.R_r)
        assert brute_force_position(rs, 0.6) == pytest.approx(
            omega_factored, abs=1e-7
        )
        assert brute_force_position(rs, 1.0) == pytest.approx(1.0, abs=1e-9)
        assert brute_force_position(rs, None) == pytest.approx(m.S_r, abs=1e-7)


class TestTrendsAndStructure:
    def test_monotonic_in_cavity_radius(self):
        ms = [compute_all(QN_2P, conf(rc)) for rc in (0.3, 1.0, 5.0, 15.0)]
        for a, b in zip(ms, ms[1:]):
            assert b.R_r > a.R_r and b.S_r > a.S_r
            assert b.R_p < a.R_p and b.S_p < a.S_p
            assert b.E_r < a.E_r and b.E_p > a.E_p

    def test_nodeless_state_ordering_under_tight_confinement(self):
        p2, d3, f4, g5 = [
            compute_all(QuantumNumbers(l + 1, l), conf(0.1))
            for l in (1, 2, 3, 4)  # 2p, 3d, 4f, 5g
        ]
        assert g5.R_r > f4.R_r > d3.R_r > p2.R_r
        assert g5.R_p > f4.R_p > d3.R_p > p2.R_p
        assert g5.S_p > f4.S_p > d3.S_p > p2.S_p
        # Shannon in position space inverts the top pair under tight
        # confinement; the rest of the chain is ordinary.
        assert f4.S_r > g5.S_r > d3.S_r > p2.S_r

    def test_compute_all_returns_cached_object(self):
        a = compute_all(QN_2P, conf(0.5))
        b = compute_all(QN_2P, conf(0.5))
        assert a is b
        c = compute_all(QN_2P, conf(0.5), EntropicOrders(2, Fraction(2, 3)))
        assert c is not a

    def test_invariant_fields(self):
        m = compute_all(QN_3D, conf(7.5))
        assert m.E_r > 0 and m.E_p > 0
        assert m.E_t == pytest.approx(m.E_r * m.E_p, rel=1e-12)
        assert m.T_t == pytest.approx(m.T_r * m.T_p, rel=1e-12)
        assert m.R_t == pytest.approx(m.R_r + m.R_p, abs=1e-12)
        assert m.S_t == pytest.approx(m.S_r + m.S_p, abs=1e-12)
