"""Tests for the spherical Bessel transform and closed-form momentum states.

Oracles: the 1s and 2p hydrogenic momentum amplitudes in closed form, the
Parseval identity, and structural properties (orthogonality, parity of
phi/p**l, linearity) that the transform must inherit from the integral it
claims to compute.
"""

import math
import types

import numpy as np
import pytest

from cavion.errors import ConvergenceError, ValidationError
from cavion.momentum import MomentumSolution, PSpec, choose_pmax, fha_momentum, to_momentum
from cavion.solver import Confinement, QuantumNumbers, fha_radial, solve_state


def phi_1s_free(p):
    # radial-amplitude convention: int phi**2 p**2 dp = 1.  The full 3D
    # convention quoted in some references is smaller by sqrt(4 pi).
    return 4.0 * math.sqrt(2.0 / math.pi) / (1.0 + p * p) ** 2


def phi_2p_free(p):
    return 128.0 * p / math.sqrt(3.0 * math.pi) / (1.0 + 4.0 * p * p) ** 3


def stored_norm(ms):
    return float(np.dot(ms._weights, ms.values**2 * ms.p_grid**2))


@pytest.fixture(scope="module")
def m_2p_tight():
    sol = solve_state(QuantumNumbers(2, 1), Confinement(Z=1.0, rc=0.2))
    return to_momentum(sol)


class TestFhaMomentum:
    def test_1s_closed_form(self):
        ms = fha_momentum(QuantumNumbers(1, 0))
        exact = phi_1s_free(ms.p_grid)
        assert np.max(np.abs(ms.values - exact)) / np.max(exact) < 1e-12

    def test_2p_closed_form(self):
        ms = fha_momentum(QuantumNumbers(2, 1))
        exact = phi_2p_free(ms.p_grid)
        assert np.max(np.abs(ms.values - exact)) / np.max(np.abs(exact)) < 1e-12

    @pytest.mark.parametrize("n,l", [(1, 0), (2, 1), (3, 2), (4, 1), (10, 4)])
    @pytest.mark.parametrize("Z", [1.0, 2.5])
    def test_unit_norm(self, n, l, Z):
        ms = fha_momentum(QuantumNumbers(n, l), Z=Z)
        assert abs(stored_norm(ms) - 1.0) < 1e-10
        assert abs(ms.norm_deficit) < 1e-10

    def test_z_scaling(self):
        # phi_Z(p) = Z**-1.5 phi_1(p/Z)
        Z = 3.0
        base = fha_momentum(QuantumNumbers(2, 1))
        scaled = fha_momentum(QuantumNumbers(2, 1), Z=Z)
        probe = scaled.p_grid[::37]
        want = Z**-1.5 * phi_2p_free(probe / Z)
        got = np.interp(probe, scaled.p_grid, scaled.values)
        # interp only to avoid re-deriving the callable; coarse tolerance
        assert np.max(np.abs(got - want)) / np.max(np.abs(want)) < 1e-3

    def test_mean_square_matches_virial(self):
        # <p^2> = -2E = Z^2/n^2 for the free ion
        ms = fha_momentum(QuantumNumbers(3, 1), Z=2.0)
        p2 = float(np.dot(ms._weights, ms.values**2 * ms.p_grid**4))
        assert abs(p2 - 4.0 / 9.0) < 1e-9

    def test_validation(self):
        with pytest.raises(ValidationError):
            fha_momentum(QuantumNumbers(1, 0), Z=0.0)


class TestTransform:
    def test_free_1s_matches_analytic(self):
        ms = to_momentum(fha_radial(QuantumNumbers(1, 0)))
        exact = phi_1s_free(ms.p_grid)
        assert np.max(np.abs(ms.values - exact)) < 1e-8

    def test_confined_2p_large_cavity_reaches_free_limit(self):
        sol = solve_state(QuantumNumbers(2, 1), Confinement(Z=1.0, rc=200.0))
        ms = to_momentum(sol)
        exact = phi_2p_free(ms.p_grid)
        assert np.max(np.abs(ms.values - exact)) < 1e-8

    def test_norm_after_renormalization(self, m_2p_tight):
        assert abs(stored_norm(m_2p_tight) - 1.0) < 1e-10

    def test_deficit_certificate(self, m_2p_tight):
        assert 0.0 <= m_2p_tight.norm_deficit <= 1e-8

    def test_parseval_pre_renormalization(self, m_2p_tight):
        ms = m_2p_tight
        raw_norm = float(np.dot(ms._weights, ms._raw_values**2 * ms.p_grid**2))
        # position norm is 1 by the solver's certificate
        assert abs(raw_norm - (1.0 - ms.norm_deficit)) < 1e-12
        assert abs(raw_norm - 1.0) <= ms.norm_deficit + 1e-10

    def test_grid_shape(self, m_2p_tight):
        ms = m_2p_tight
        assert np.all(np.diff(ms.p_grid) > 0)
        assert ms.p_grid[0] > 0
        assert ms.p_grid[-1] <= ms.p_max
        assert ms.values.dtype == np.float64

    def test_phase_metadata(self):
        powers = {(1, 0): 0, (2, 1): 1, (3, 2): 2, (4, 3): 3, (5, 4): 0}
        for (n, l), want in powers.items():
            assert fha_momentum(QuantumNumbers(n, l)).phase_power == want

    def test_downstream_shannon_value(self, m_2p_tight):
        # reference S_p for the sharply confined 2p state; stored-grid
        # quadrature carries a few 1e-6 from the log kinks at the zeros
        # of phi, well inside the 1e-5 momentum-space tolerance
        ms = m_2p_tight
        rho = ms.values**2
        mask = rho > 0
        s_rad = -float(
            np.dot(ms._weights[mask], rho[mask] * np.log(rho[mask]) * ms.p_grid[mask] ** 2)
        )
        s_ang = 2.0 / 3.0 - math.log(1.5) + math.log(2.0 * math.pi)
        assert abs(s_rad + s_ang - 11.3396511782) < 1e-5


class TestCutoffLadder:
    def test_sharp_confinement_needs_large_cutoff(self):
        sol = solve_state(QuantumNumbers(2, 1), Confinement(Z=1.0, rc=0.1))
        ms = to_momentum(sol)
        assert ms.p_max >= 80.0
        deficits = [d for _, d in ms._rungs]
        assert all(b > a for a, b in zip(deficits[1:], deficits)), deficits
        assert deficits[-1] <= 1e-8 < deficits[-2]

    def test_free_state_accepts_small_cutoff(self):
        assert choose_pmax(fha_radial(QuantumNumbers(1, 0))) <= 80.0

    def test_pinned_cutoff_too_small(self):
        sol = solve_state(QuantumNumbers(2, 1), Confinement(Z=1.0, rc=0.2))
        with pytest.raises(ConvergenceError):
            to_momentum(sol, PSpec(p_max=20.0))

    def test_pspec_validation(self):
        with pytest.raises(ValidationError):
            PSpec(target_deficit=0.0)
        with pytest.raises(ValidationError):
            PSpec(target_deficit=2e-6)
        with pytest.raises(ValidationError):
            PSpec(p_max=-1.0)


class TestStructuralInvariants:
    def test_orthogonality_first_two_same_l(self):
        conf = Confinement(Z=1.0, rc=5.0)
        s1 = solve_state(QuantumNumbers(2, 1), conf)
        s2 = solve_state(QuantumNumbers(3, 1), conf)
        pmax = max(choose_pmax(s1), choose_pmax(s2))
        m1 = to_momentum(s1, PSpec(p_max=pmax))
        m2 = to_momentum(s2, PSpec(p_max=pmax))
        assert np.array_equal(m1.p_grid, m2.p_grid)
        overlap = float(np.dot(m1._weights, m1.values * m2.values * m1.p_grid**2))
        assert abs(overlap) < 1e-7

    @pytest.mark.parametrize("n,l,rc", [(2, 1, 0.2), (3, 2, 1.0), (1, 0, 4.0)])
    def test_origin_parity(self, n, l, rc):
        # phi/p**l must be even and nonzero at the origin: a quadratic fit
        # through the three smallest grid points has no linear term
        sol = solve_state(QuantumNumbers(n, l), Confinement(Z=1.0, rc=rc))
        ms = to_momentum(sol)
        ps = ms.p_grid[:3]
        ys = ms.values[:3] / ps**l
        c2, c1, c0 = np.polyfit(ps, ys, 2)
        assert abs(c0) > 0
        assert abs(c1) * ps[-1] / abs(c0) < 1e-6

    def test_linearity_pre_renormalization(self):
        conf = Confinement(Z=1.0, rc=3.0)
        s1 = solve_state(QuantumNumbers(1, 0), conf)
        s2 = solve_state(QuantumNumbers(2, 0), conf)
        pmax = max(choose_pmax(s1), choose_pmax(s2))
        spec = PSpec(p_max=pmax, target_deficit=1e-6)
        m1 = to_momentum(s1, spec)
        m2 = to_momentum(s2, spec)
        # orthonormal combination keeps the input normalized
        combo = types.SimpleNamespace(
            qn=s1.qn,
            conf=conf,
            _r_end=s1._r_end,
            _wave_k=max(s1._wave_k, s2._wave_k),
            u=lambda r: 0.6 * s1.u(r) - 0.8 * s2.u(r),
        )
        mc = to_momentum(combo, spec)
        want = 0.6 * m1._raw_values - 0.8 * m2._raw_values
        assert np.max(np.abs(mc._raw_values - want)) < 1e-10
