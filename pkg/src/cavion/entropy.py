"""Entropic moments and the four information measures in r, p, and product form.

All measures derive from full-space entropic moments

    W^lam = (2 pi)^(1-lam) * w_rad^lam * w_polar^lam,

where w_rad^lam = int rho^lam r**2 dr (resp. p**2 dp) and w_polar comes from
the angular module; building every family (Renyi, Tsallis, Shannon, Onicescu)
from the same moment objects keeps the factor conventions from drifting
between them.

Charge scaling: densities obey rho_Z(r) = Z**3 rho_1(Z r), so position
moments scale as W_r(Z) = Z**(3(lam-1)) W_r(1) and momentum ones inversely.
Renyi, Shannon and Onicescu measures at charge Z are the plain definitions
applied to the charge-Z density (linear in ln Z with slopes -3, +3).  The
Tsallis pair instead carries explicit Z**-3 / Z**3 prefactors applied to the
charge-1 moments, and every composite quantity (R_t, S_t, T_t, E_t) is
defined in the charge-1 frame, which makes them exactly invariant under
scale_measures.  compute_all therefore converts its directly computed
moments to the charge-1 frame and draws composites from there, so the
direct route and the scaled route agree to quadrature accuracy.

Position-space integrals run on panels split at density zeros with edges
geometrically graded into each zero (and into the cavity wall), since
rho^lam has |r - r0|**(2 lam) behavior there; each result carries a
halved-panel refinement certificate.  Momentum-space integrals reuse the
transform's quadrature grid, whose accuracy is certified upstream by the
two-rule cross-check and the norm-deficit bound; their error floor is a
few 1e-7 for integrands with kinks at the zeros of phi (fractional orders,
Shannon) and negligible for integer orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .angular import angular_factor
from .errors import ConvergenceError, ValidationError
from .momentum import MomentumSolution, fha_momentum, to_momentum
from .solver import Confinement, QuantumNumbers, RadialSolution, fha_radial, solve_state
from .special import composite_rule, graded_edges

__all__ = [
    "DEFAULT_ORDERS",
    "EntropicOrders",
    "InfoMeasures",
    "compute_all",
    "onicescu",
    "radial_moment",
    "renyi",
    "renyi_sum",
    "scale_measures",
    "shannon",
    "tsallis",
]

_GRADE_LEVELS = 25
_REFINE_TOL = 1e-10
_MAX_REFINE = 4


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(1_000_000)
    raise ValidationError(f"cannot interpret order {x!r}")


@dataclass(frozen=True)
class EntropicOrders:
    """Conjugate Renyi/Tsallis order pair: 1/alpha + 1/beta = 2.

    Orders are held as exact rationals so the conjugacy relation cannot
    drift; defaults are the (3/5, 3) pair used throughout the tables.
    """

    alpha: Fraction = Fraction(3, 5)
    beta: Fraction = Fraction(3)

    def __post_init__(self):
        a = _as_fraction(self.alpha)
        b = _as_fraction(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if a <= 0 or b <= 0 or a == 1 or b == 1:
            raise ValidationError(f"orders must be positive and != 1, got ({a}, {b})")
        if abs(float(Fraction(1, 1) / a + Fraction(1, 1) / b - 2)) > 1e-12:
            raise ValidationError(f"orders ({a}, {b}) violate 1/alpha + 1/beta = 2")

    @classmethod
    def conjugate_pair(cls, alpha) -> "EntropicOrders":
        a = _as_fraction(alpha)
        if a <= Fraction(1, 2) or a == 1:
            raise ValidationError(f"no positive conjugate for alpha={a}")
        return cls(a, a / (2 * a - 1))


DEFAULT_ORDERS = EntropicOrders()


@dataclass(frozen=True)
class InfoMeasures:
    """All information measures of one state at one (Z, rc).

    R (Renyi, nats), S (Shannon, nats), T (Tsallis), E (Onicescu) in
    position (_r), momentum (_p), and composite (_t) form.  Composites are
    defined in the charge-1 frame and therefore invariant under Z-scaling.
    """

    qn: QuantumNumbers
    Z: float
    rc: float
    orders: EntropicOrders
    R_r: float
    R_p: float
    R_t: float
    S_r: float
    S_p: float
    S_t: float
    T_r: float
    T_p: float
    T_t: float
    E_r: float
    E_p: float
    E_t: float
    _base: dict = field(repr=False, compare=False, default=None)


# ---------------------------------------------------------------------------
# radial entropic moments


def _radial_edges(rs: RadialSolution) -> np.ndarray:
    """Quadrature edges: oscillation-resolving panels cut at the zeros of u,
    graded into each zero, into the origin for l > 0, and into a hard wall."""
    r_end = rs._r_end
    kappa = math.sqrt(max(-2.0 * rs.energy, 0.0))
    osc = max(rs._wave_k, kappa, 1.0 / r_end)
    width = min(0.45 * math.pi / osc, r_end / 12.0)
    cuts = [0.0, *rs._zeros, r_end]
    parts = []
    walled = math.isfinite(rs.conf.rc)
    for i in range(len(cuts) - 1):
        a, b = cuts[i], cuts[i + 1]
        base = np.linspace(a, b, max(6, int(math.ceil((b - a) / width))) + 1)
        parts.append(base)
        if i > 0 or rs.qn.l > 0:
            parts.append(graded_edges(base[0], base[1], "left", _GRADE_LEVELS))
        if i < len(cuts) - 2 or walled:
            parts.append(graded_edges(base[-2], base[-1], "right", _GRADE_LEVELS))
    return np.unique(np.concatenate(parts))


def _halved(edges: np.ndarray) -> np.ndarray:
    return np.unique(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))


def _refined_integral(fn, edges: np.ndarray, what: str, floor: float = 0.0) -> float:
    rule = composite_rule(edges, 12)
    prev = float(np.dot(rule.weights, fn(rule.nodes)))
    for _ in range(_MAX_REFINE):
        edges = _halved(edges)
        rule = composite_rule(edges, 12)
        cur = float(np.dot(rule.weights, fn(rule.nodes)))
        if abs(cur - prev) <= _REFINE_TOL * max(abs(cur), floor, 1e-300):
            return cur
        prev = cur
    raise ConvergenceError(
        f"{what} did not converge: last refinement moved {abs(cur - prev):.3e}"
    )


def _moment_r(rs: RadialSolution, lam: float) -> float:
    def integrand(r):
        u2 = rs.u(r) ** 2
        return u2**lam * r ** (2.0 - 2.0 * lam)

    return _refined_integral(integrand, _radial_edges(rs), f"w^{lam} of {rs.qn.label}")


def _shannon_r(rs: RadialSolution) -> float:
    def integrand(r):
        u2 = rs.u(r) ** 2
        return np.where(u2 > 0.0, -u2 * (np.log(np.where(u2 > 0, u2, 1.0)) - 2.0 * np.log(r)), 0.0)

    return _refined_integral(
        integrand, _radial_edges(rs), f"shannon integral of {rs.qn.label}", floor=1.0
    )


# Sign-change panels of the stored momentum grid are re-integrated when the
# estimated panel error of a non-smooth integrand exceeds this fraction of
# the plain-grid value, up to a fixed number of panels per integral.
_P_FLIP_GATE = 1e-7
_P_FLIP_CAP = 64


def _p_integral(ms: MomentumSolution, f) -> float:
    """Integral of f(phi**2) p**2 dp over the stored momentum grid.

    f may be non-smooth at phi = 0 (the Shannon integrand's log, the cusp
    of non-integer moments), which plain Gauss panels integrate poorly when
    a zero of phi falls inside them.  Panels around detected sign changes
    whose contribution estimate clears the gate are swapped for sub-rules
    graded into the located zero, with phi evaluated through the solution's
    own evaluator, so the correction is exact quadrature, not extrapolation.
    """
    p, w, v = ms.p_grid, ms._weights, ms.values
    rho = v * v
    base = float(np.dot(w, f(rho) * p * p))
    phi_fn, edges = ms._phi, ms._edges
    if phi_fn is None or edges is None:
        return base
    flips = np.nonzero(v[:-1] * v[1:] < 0.0)[0]
    if flips.size == 0:
        return base
    gate = _P_FLIP_GATE * max(1.0, abs(base))
    cand = []
    for i in flips:
        a_i, b_i = float(p[i]), float(p[i + 1])
        # widen by one panel per side: the near-singular curvature also
        # degrades the Gauss panels adjacent to the one holding the zero
        ja = min(max(int(np.searchsorted(edges, a_i) - 2), 0), edges.size - 2)
        jb = min(max(int(np.searchsorted(edges, b_i)), 0), edges.size - 2)
        h = float(edges[jb + 1] - edges[ja])
        slope = (float(v[i + 1]) - float(v[i])) / max(b_i - a_i, 1e-300)
        proxy = float(f(np.array([(slope * h) ** 2]))[0])
        est = 0.25 * abs(proxy) * h * (0.5 * (a_i + b_i)) ** 2
        if est > gate:
            cand.append((est, ja, jb, a_i, b_i))
    if not cand:
        return base
    windows = []  # merged [panel_lo, panel_hi, brackets, max_est]
    for est, ja, jb, a_i, b_i in sorted(
        sorted(cand, key=lambda t: (-t[0], t[1]))[:_P_FLIP_CAP],
        key=lambda t: t[1],
    ):
        if windows and ja <= windows[-1][1] + 1:
            windows[-1][1] = max(windows[-1][1], jb)
            windows[-1][2].append((a_i, b_i))
            windows[-1][3] = max(windows[-1][3], est)
        else:
            windows.append([ja, jb, [(a_i, b_i)], est])
    # Correct in descending-estimate order (ringing trains enter from low p
    # first, keeping the evaluator's internal rule coarse) and stop after
    # consecutive corrections prove negligible: the per-window error of a
    # decaying oscillation train falls off monotonically in practice.
    small_run = 0
    for ja, jb, brackets, _ in sorted(windows, key=lambda t: (-t[3], t[0])):
        wa, wb = float(edges[ja]), float(edges[jb + 1])
        inside = (p > wa) & (p < wb)
        delta = -float(np.dot(w[inside], f(rho[inside]) * p[inside] ** 2))
        roots = []
        for a_i, b_i in brackets:
            ya = float(phi_fn(a_i)[0])
            yb = float(phi_fn(b_i)[0])
            if ya == 0.0:
                roots.append(a_i)
            elif yb == 0.0:
                roots.append(b_i)
            elif ya * yb < 0.0:
                roots.append(
                    float(
                        brentq(
                            lambda x: float(phi_fn(x)[0]),
                            a_i,
                            b_i,
                            xtol=1e-15 * max(1.0, b_i),
                            maxiter=120,
                        )
                    )
                )
            else:  # evaluator disagrees with the stored sign: amplitude ~ 0
                roots.append(0.5 * (a_i + b_i))
        roots = sorted(set(roots))
        cuts = [wa, wb]
        bounds = (
            [wa]
            + [0.5 * (r1 + r2) for r1, r2 in zip(roots[:-1], roots[1:])]
            + [wb]
        )
        for r, lo_c, hi_c in zip(roots, bounds[:-1], bounds[1:]):
            if lo_c < r:
                cuts.extend(graded_edges(lo_c, r, "right", 14))
            if r < hi_c:
                cuts.extend(graded_edges(r, hi_c, "left", 14))
        rule = composite_rule(np.unique(np.asarray(cuts)), 10)
        ph = phi_fn(rule.nodes)
        delta += float(np.dot(rule.weights, f(ph * ph) * rule.nodes**2))
        base += delta
        if abs(delta) < 1e-10 * max(1.0, abs(base)):
            small_run += 1
            if small_run >= 2:
                break
        else:
            small_run = 0
    return base


def _moment_p(ms: MomentumSolution, lam: float) -> float:
    lam = float(lam)
    if lam.is_integer():
        rho = ms.values**2
        return float(np.dot(ms._weights, rho**lam * ms.p_grid**2))
    return _p_integral(ms, lambda rho: rho**lam)


def _shannon_p(ms: MomentumSolution) -> float:
    def f(rho):
        safe = np.where(rho > 0.0, rho, 1.0)
        return np.where(rho > 0.0, -rho * np.log(safe), 0.0)

    out = _p_integral(ms, f)
    # Tail beyond p_max, evaluated on the wall-state asymptote rho ~ C p**-6
    # calibrated so its density integral equals the measured norm deficit:
    # int_{P}^{inf} -rho ln(rho) p**2 dp = d (2 - ln 3 + 3 ln P - ln d).
    d, pmax = ms.norm_deficit, ms.p_max
    if d > 0.0 and pmax > 0.0:
        out += d * (2.0 - math.log(3.0) + 3.0 * math.log(pmax) - math.log(d))
    return out


def radial_moment(density, lam) -> float:
    """w^lam = int rho^lam r**2 dr for a position-space solution, or the
    p-space analogue for a momentum-space one; lam = 1 recovers the norm."""
    lam = float(lam)
    if not lam > 0:
        raise ValidationError(f"moment order must be positive, got {lam}")
    if isinstance(density, RadialSolution):
        return _moment_r(density, lam)
    if isinstance(density, MomentumSolution):
        return _moment_p(density, lam)
    raise ValidationError(f"unsupported density object {type(density).__name__}")


# ---------------------------------------------------------------------------
# measure families


def _full_moment(w_radial: float, l: int, m: int, lam: float) -> float:
    af = angular_factor(l, m)
    return (2.0 * math.pi) ** (1.0 - lam) * w_radial * af.moment(lam)


def renyi(w_radial: float, l: int, m: int, lam) -> float:
    """R^lam = ln[(2 pi)^(1-lam) w_radial w_polar] / (1 - lam)."""
    lam = float(lam)
    if lam == 1.0:
        raise ValidationError("Renyi order 1 is the Shannon limit; use shannon()")
    if not w_radial > 0:
        raise ValidationError(f"radial moment must be positive, got {w_radial}")
    return math.log(_full_moment(w_radial, l, m, lam)) / (1.0 - lam)


def renyi_sum(orders: EntropicOrders, R_r: float, R_p: float) -> float:
    """Composite Renyi entropy at conjugate orders."""
    del orders  # conjugacy already enforced by the type
    return R_r + R_p


def shannon(density_r, density_p, l: int, m: int) -> tuple:
    """(S_r, S_p, S_t) with the shared angular term included in each space."""
    af = angular_factor(l, m)
    s_r = _shannon_r(density_r) + af.shannon_angular
    s_p = _shannon_p(density_p) + af.shannon_angular
    return s_r, s_p, s_r + s_p


def tsallis(w_r_full: float, w_p_full: float, orders: EntropicOrders, Z: float) -> tuple:
    """(T_r, T_p, T_t) from charge-1 full moments at the conjugate orders."""
    a, b = float(orders.alpha), float(orders.beta)
    t_r = (1.0 - Z**-3 * w_r_full) / (a - 1.0)
    t_p = (1.0 - Z**3 * w_p_full) / (b - 1.0)
    return t_r, t_p, t_r * t_p


def onicescu(w2_r_full: float, w2_p_full: float, Z: float) -> tuple:
    """(E_r, E_p, E_t) from charge-1 order-2 full moments."""
    e_r = Z**3 * w2_r_full
    e_p = Z**-3 * w2_p_full
    return e_r, e_p, e_r * e_p


# ---------------------------------------------------------------------------
# orchestration


def compute_all(qn: QuantumNumbers, conf: Confinement, orders: EntropicOrders | None = None) -> InfoMeasures:
    """Solve, transform, and evaluate every measure for one state.

    rc = inf selects the analytic free-ion solutions.  Results are cached;
    repeated calls with equal arguments return the same object.
    """
    return _compute_all(qn, conf, orders or DEFAULT_ORDERS)


@lru_cache(maxsize=512)
def _compute_all(qn: QuantumNumbers, conf: Confinement, orders: EntropicOrders) -> InfoMeasures:
    Z = conf.Z
    if math.isfinite(conf.rc):
        rs = solve_state(qn, conf)
        ms = to_momentum(rs)
    else:
        rs = fha_radial(qn, Z)
        ms = fha_momentum(qn, Z)
    af = angular_factor(qn.l, 0)
    a, b = float(orders.alpha), float(orders.beta)

    # full moments of the charge-Z densities, then their charge-1 frame values
    d_r_a = _full_moment(_moment_r(rs, a), qn.l, 0, a)
    d_p_b = _full_moment(_moment_p(ms, b), qn.l, 0, b)
    d_r_2 = _full_moment(_moment_r(rs, 2.0), qn.l, 0, 2.0)
    d_p_2 = _full_moment(_moment_p(ms, 2.0), qn.l, 0, 2.0)
    w_r_a = Z ** (-3.0 * (a - 1.0)) * d_r_a
    w_p_b = Z ** (3.0 * (b - 1.0)) * d_p_b
    w_r_2 = Z**-3.0 * d_r_2
    w_p_2 = Z**3.0 * d_p_2

    s_r = _shannon_r(rs) + af.shannon_angular
    s_p = _shannon_p(ms) + af.shannon_angular
    ln_z3 = 3.0 * math.log(Z)

    base = {
        "R_r": math.log(w_r_a) / (1.0 - a),
        "R_p": math.log(w_p_b) / (1.0 - b),
        "S_r": s_r + ln_z3,
        "S_p": s_p - ln_z3,
        "w_r_alpha": w_r_a,
        "w_p_beta": w_p_b,
        "w_r_2": w_r_2,
        "w_p_2": w_p_2,
    }

    t_r, t_p, _ = tsallis(w_r_a, w_p_b, orders, Z)
    e_r, e_p, _ = onicescu(w_r_2, w_p_2, Z)
    return InfoMeasures(
        qn=qn,
        Z=Z,
        rc=conf.rc,
        orders=orders,
        R_r=math.log(d_r_a) / (1.0 - a),
        R_p=math.log(d_p_b) / (1.0 - b),
        R_t=base["R_r"] + base["R_p"],
        S_r=s_r,
        S_p=s_p,
        S_t=base["S_r"] + base["S_p"],
        T_r=t_r,
        T_p=t_p,
        T_t=tsallis(w_r_a, w_p_b, orders, 1.0)[2],
        E_r=e_r,
        E_p=e_p,
        E_t=onicescu(w_r_2, w_p_2, 1.0)[2],
        _base=base,
    )


def scale_measures(base: InfoMeasures, Z: float) -> InfoMeasures:
    """Measures at charge Z from a charge-1 run at cavity radius Z * rc.

    Per-space quantities shift by the closed-form Z laws; composites are
    copied unchanged (they are charge-1-frame quantities by definition).
    """
    if not Z > 0:
        raise ValidationError(f"Z must be positive, got {Z}")
    if base.Z != 1.0:
        raise ValidationError("scale_measures requires a charge-1 base computation")
    if Z == 1.0:
        return base
    bd = base._base
    ln_z3 = 3.0 * math.log(Z)
    t_r, t_p, _ = tsallis(bd["w_r_alpha"], bd["w_p_beta"], base.orders, Z)
    e_r, e_p, _ = onicescu(bd["w_r_2"], bd["w_p_2"], Z)
    return replace(
        base,
        Z=Z,
        rc=base.rc / Z,
        R_r=bd["R_r"] - ln_z3,
        R_p=bd["R_p"] + ln_z3,
        S_r=bd["S_r"] - ln_z3,
        S_p=bd["S_p"] + ln_z3,
        T_r=t_r,
        T_p=t_p,
        E_r=e_r,
        E_p=e_p,
    )
