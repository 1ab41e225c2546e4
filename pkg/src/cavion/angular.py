"""Angular densities and angular entropic moments.

The polar density chi(theta) = |Theta_lm(theta)|^2 is normalized so that
int chi sin(theta) dtheta = 1.  For m = 0 states the azimuthal density is
uniform, so the full solid-angle moment of order lambda factorizes as
(2*pi)**(1-lambda) * int chi**lambda sin(theta) dtheta; that bookkeeping
lives in the entropy module.  Everything here is independent of the
confinement radius and of Z, and depends only on (l, m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, ValidationError
from .special import composite_rule, graded_edges

__all__ = ["AngularFactor", "angular_factor", "angular_moment", "angular_shannon"]

_GRADE_LEVELS = 30
_BASE_PANELS = 24


@dataclass(frozen=True)
class AngularFactor:
    """Cached angular data for one (l, m) pair.

    moment_cache maps the order lambda to omega^lambda_(theta,phi) =
    int chi^lambda sin(theta) dtheta (polar part only; the azimuthal
    (2*pi)^(1-lambda) factor is applied by the entropy module).
    """

    l: int
    m: int
    shannon_angular: float
    moment_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def moment(self, lam: float) -> float:
        key = float(lam)
        if key not in self.moment_cache:
            self.moment_cache[key] = _polar_moment(self.l, self.m, key)
        return self.moment_cache[key]


def _validate_lm(l: int, m: int) -> None:
    if l < 0 or abs(m) > l:
        raise ValidationError(f"invalid angular numbers l={l}, m={m}")


def _plm_vec(l: int, m: int, t: np.ndarray) -> np.ndarray:
    """Associated Legendre P_l^m on an array, same recurrence as the scalar op."""
    m = abs(m)
    if m > 0:
        somx2 = np.sqrt(np.maximum(0.0, 1.0 - t * t))
        pmm = np.full_like(t, float((-1) ** m) * _double_fact(2 * m - 1)) * somx2**m
    else:
        pmm = np.ones_like(t)
    if l == m:
        return pmm
    pm1 = t * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for k in range(m + 2, l + 1):
        pmm, pm1 = pm1, (t * (2 * k - 1) * pm1 - (k + m - 1) * pmm) / (k - m)
    return pm1


def _double_fact(n: int) -> float:
    out = 1.0
    for k in range(n, 1, -2):
        out *= k
    return out


def _chi_norm(l: int, m: int) -> float:
    m = abs(m)
    return (2 * l + 1) / 2.0 * math.factorial(l - m) / math.factorial(l + m)


def chi(l: int, m: int, t) -> np.ndarray:
    """Normalized polar density chi(cos(theta)); int_{-1}^{1} chi dt = 1."""
    _validate_lm(l, m)
    t = np.asarray(t, dtype=float)
    return _chi_norm(l, m) * _plm_vec(l, m, t) ** 2


@lru_cache(maxsize=None)
def _plm_interior_zeros(l: int, m: int) -> tuple:
    """Zeros of P_l^m strictly inside (-1, 1), by sign-change bisection."""
    m = abs(m)
    if l == m:
        return ()
    grid = np.linspace(-1.0, 1.0, 4001)[1:-1]
    vals = _plm_vec(l, m, grid)
    zeros = [float(g) for g, v in zip(grid, vals) if v == 0.0]
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    zeros += [
        brentq(lambda u: float(_plm_vec(l, m, np.array([u]))[0]), grid[i], grid[i + 1],
               xtol=1e-15)
        for i in idx
    ]
    zeros = sorted(zeros)
    if len(zeros) != l - m:
        raise ConvergenceError(f"could not isolate all zeros of P_{l}^{m}")
    return tuple(zeros)


@lru_cache(maxsize=None)
def _polar_edges(l: int, m: int) -> tuple:
    """Panel edges on [-1, 1], geometrically graded into each zero of chi."""
    zeros = _plm_interior_zeros(l, m)
    cuts = [-1.0] + list(zeros) + [1.0]
    grade_ends = abs(m) > 0  # chi ~ (1 - t^2)^m makes chi^lam kink at the poles
    edges: set = set()
    for a, b in zip(cuts[:-1], cuts[1:]):
        interior = np.linspace(a, b, _BASE_PANELS + 1)
        edges.update(interior.tolist())
        if a > -1.0 or grade_ends:
            edges.update(graded_edges(a, interior[1], "left", _GRADE_LEVELS).tolist())
        if b < 1.0 or grade_ends:
            edges.update(graded_edges(interior[-2], b, "right", _GRADE_LEVELS).tolist())
    return tuple(sorted(edges))


def _halved(edges) -> np.ndarray:
    e = np.asarray(edges)
    return np.unique(np.concatenate([e, (e[:-1] + e[1:]) / 2.0]))


def _polar_moment(l: int, m: int, lam: float) -> float:
    edges = np.array(_polar_edges(l, m))
    rule = composite_rule(edges, 12)
    val = float(np.dot(rule.weights, chi(l, m, rule.nodes) ** lam))
    # refinement certificate: halving every panel must not move the result
    fine = composite_rule(_halved(edges), 12)
    val2 = float(np.dot(fine.weights, chi(l, m, fine.nodes) ** lam))
    if abs(val - val2) > 1e-11 * max(abs(val2), 1e-12):
        raise ConvergenceError(
            f"angular moment did not converge for l={l}, m={m}, lambda={lam}"
        )
    return val2


def angular_moment(l: int, m: int, lam: float) -> float:
    """Polar entropic moment omega^lambda_(theta,phi) = int chi^lambda sin dtheta.

    Parameters
    ----------
    l, m : int
        Angular quantum numbers, |m| <= l.
    lam : float
        Moment order, lam > 0.
    """
    _validate_lm(l, m)
    if not lam > 0:
        raise ValidationError(f"moment order must be positive, got {lam}")
    return angular_factor(l, m).moment(lam)


def angular_shannon(l: int, m: int) -> float:
    """Full solid-angle Shannon entropy S_(theta,phi) for an (l, m) state.

    Equals -int chi ln(chi) sin(theta) dtheta + ln(2*pi); the second term is
    the uniform azimuthal contribution for m = 0.
    """
    _validate_lm(l, m)
    return angular_factor(l, m).shannon_angular


@lru_cache(maxsize=None)
def angular_factor(l: int, m: int) -> AngularFactor:
    """Build (and cache) the angular data object for (l, m)."""
    _validate_lm(l, m)
    edges = np.array(_polar_edges(l, m))
    rule = composite_rule(_halved(edges), 12)
    dens = chi(l, m, rule.nodes)
    safe = np.where(dens > 0.0, dens, 1.0)
    s_polar = -float(np.dot(rule.weights, dens * np.log(safe)))
    return AngularFactor(l=l, m=m, shannon_angular=s_polar + math.log(2.0 * math.pi))
