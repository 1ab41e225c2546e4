"""Momentum-space wavefunctions via the truncated spherical Bessel transform.

The radial amplitude is

    phi_{nl}(p) = sqrt(2/pi) * int_0^{rc} R(r) j_l(p r) r**2 dr,

with the overall (-i)**l phase of the plane-wave expansion factored out and
recorded as metadata (densities never see it).  Because the position
function ends at a wall with nonzero slope, |phi| decays only like p**-3,
so the cutoff p_max is chosen from a geometric ladder {20 Z, 40 Z, 80 Z,
...} by measuring the norm deficit 1 - int phi**2 p**2 dp and stopping at
the first rung below the target.  The small deficit that remains is removed
by renormalizing, which keeps every downstream moment consistent with a
unit-norm density on the stored grid.

Every length in the grid construction scales like 1/Z and every momentum
like Z (including the ladder), so the grid of a charge-Z run is the exact
scaled image of the grid of the equivalent charge-1 run.  Quadrature and
truncation signatures then cancel in charge-scaling round trips instead of
leaving a few-1e-7 residue in tail-sensitive integrals such as the
momentum Shannon entropy.

The r-integral uses composite Gauss-Legendre panels no wider than a quarter
oscillation of j_l(p_max r); the p-grid is log-dense near the origin and
then uses half-oscillation panels of sin(p rc).  Because the panels are
uniform, sin(p r) over the outer-product grid is assembled from small
per-center and per-offset trig tables by angle addition, which is several
times cheaper than evaluating libm trig per matrix element.  A deterministic
subsample of every transform is recomputed through the independent generic
Bessel path on a finer rule and compared, so a quadrature defect in either
route raises instead of contaminating results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from scipy.special import roots_gegenbauer

from .errors import ConvergenceError, PrecisionLossError, ValidationError
from .solver import QuantumNumbers, RadialSolution
from .special import _jl_series, composite_rule, gauss_legendre, graded_edges, sph_jl_one

__all__ = ["MomentumSolution", "PSpec", "choose_pmax", "fha_momentum", "to_momentum"]

_LADDER_BASE = 20.0
_LADDER_MAX_RUNG = 12  # caps p_max at 20 * 2**12 = 81920
_CHUNK_BUDGET = 4_000_000  # outer-product elements held at once


@dataclass(frozen=True)
class PSpec:
    """Cutoff control for to_momentum.

    p_max = None lets the deficit ladder choose the cutoff; a pinned value
    fixes the grid exactly (useful for comparing transforms of different
    states on identical nodes).
    """

    p_max: float | None = None
    target_deficit: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.target_deficit <= 1e-6:
            raise ValidationError(
                f"target_deficit must lie in (0, 1e-6], got {self.target_deficit}"
            )
        if self.p_max is not None and not self.p_max > 0:
            raise ValidationError(f"p_max must be positive, got {self.p_max}")


@dataclass(frozen=True)
class MomentumSolution:
    """Normalized radial momentum amplitude phi(p) on its quadrature grid."""

    qn: QuantumNumbers
    p_grid: np.ndarray = field(repr=False, compare=False)
    values: np.ndarray = field(repr=False, compare=False)
    p_max: float
    norm_deficit: float
    _weights: np.ndarray = field(repr=False, compare=False, default=None)
    _raw_values: np.ndarray = field(repr=False, compare=False, default=None)
    _rungs: tuple = field(repr=False, compare=False, default=())
    # quadrature panel edges of the stored grid and a normalized phi
    # evaluator for arbitrary p; entropy integrals use them to re-integrate
    # panels around sign changes of phi, where log- or cusp-type integrands
    # defeat plain Gauss panels.
    _edges: np.ndarray = field(repr=False, compare=False, default=None)
    _phi: object = field(repr=False, compare=False, default=None)

    @property
    def phase_power(self) -> int:
        """The transform carries a (-i)**l phase; stored as an exponent only."""
        return self.qn.l % 4


class _UniformRule:
    """Uniform composite Gauss-Legendre panels in center + offset form."""

    def __init__(self, a: float, b: float, n_panels: int, n_gl: int):
        gl = gauss_legendre(n_gl, -1.0, 1.0)
        w = (b - a) / n_panels
        self.centers = a + (np.arange(n_panels) + 0.5) * w
        self.offsets = 0.5 * w * gl.nodes
        self.point_weights = 0.5 * w * gl.weights
        self.nodes = (self.centers[:, None] + self.offsets[None, :]).ravel()
        self.weights = np.tile(self.point_weights, n_panels)


def _jl_trig(l: int, x, sinx, cosx):
    """j_l from precomputed sin/cos, series fallback below the stable range."""
    lo = x < max(l, 2.0) - 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / x
        if l == 0:
            res = sinx * inv
        else:
            jm = sinx * inv
            jc = (sinx * inv - cosx) * inv
            for k in range(2, l + 1):
                jm, jc = jc, (2 * k - 1) * inv * jc - jm
            res = jc
    if lo.any():
        res[lo] = _jl_series(l, x[lo])
    return res


def _phi_factored(l: int, p_arr: np.ndarray, rrule: _UniformRule, a_weighted: np.ndarray) -> np.ndarray:
    """phi at p_arr from the angle-addition trig tables; a_weighted is the
    flattened r-rule weight * u(r) * r vector."""
    m, kk = rrule.centers.size, rrule.offsets.size
    out = np.empty(p_arr.size)
    chunk = max(4, _CHUNK_BUDGET // (m * kk))
    for i0 in range(0, p_arr.size, chunk):
        ps = p_arr[i0 : i0 + chunk]
        ac = np.outer(ps, rrule.centers)
        ad = np.outer(ps, rrule.offsets)
        sc, cc = np.sin(ac), np.cos(ac)
        sd, cd = np.sin(ad), np.cos(ad)
        sinx = sc[:, :, None] * cd[:, None, :] + cc[:, :, None] * sd[:, None, :]
        cosx = cc[:, :, None] * cd[:, None, :] - sc[:, :, None] * sd[:, None, :]
        x = ac[:, :, None] + ad[:, None, :]
        jl = _jl_trig(l, x, sinx, cosx)
        out[i0 : i0 + chunk] = jl.reshape(ps.size, m * kk) @ a_weighted
    return math.sqrt(2.0 / math.pi) * out


def _r_rule(r_end: float, p_hi: float, wave_k: float) -> _UniformRule:
    osc = max(p_hi, wave_k, 1.0 / r_end)
    width = min(0.9 * math.pi / (2.0 * osc), r_end / 16.0)
    return _UniformRule(0.0, r_end, int(math.ceil(r_end / width)), 6)


def _origin_edges(bulk_start: float) -> np.ndarray:
    """Geometrically refined panel edges on (0, bulk_start]."""
    edges = [bulk_start]
    w = bulk_start
    for _ in range(9):
        w /= 2.0
        edges.append(w)
    edges.append(0.0)
    return np.array(sorted(edges))


def _segment(rs: RadialSolution, lo: float, hi: float):
    """Transform one p-interval with an r-rule matched to its upper edge."""
    r_end = rs._r_end
    rrule = _r_rule(r_end, hi, rs._wave_k)
    a_weighted = rrule.weights * rs.u(rrule.nodes) * rrule.nodes
    half_period = 0.9 * math.pi / r_end
    if lo == 0.0:
        bulk_w = min(half_period, hi / 40.0)
        head_edges = _origin_edges(bulk_w)
        head = composite_rule(head_edges, 10)
        n_panels = int(math.ceil((hi - bulk_w) / bulk_w))
        tail = _UniformRule(bulk_w, hi, n_panels, 6)
        p_nodes = np.concatenate([head.nodes, tail.nodes])
        p_weights = np.concatenate([head.weights, tail.weights])
        phi_head = math.sqrt(2.0 / math.pi) * (
            sph_jl_one(rs.qn.l, np.outer(head.nodes, rrule.nodes)) @ a_weighted
        )
        phi_tail = _phi_factored(rs.qn.l, tail.nodes, rrule, a_weighted)
        phi = np.concatenate([phi_head, phi_tail])
        edges = np.concatenate([head_edges, np.linspace(bulk_w, hi, n_panels + 1)])
    else:
        n_panels = int(math.ceil((hi - lo) / half_period))
        prule = _UniformRule(lo, hi, n_panels, 6)
        p_nodes, p_weights = prule.nodes, prule.weights
        phi = _phi_factored(rs.qn.l, p_nodes, rrule, a_weighted)
        edges = np.linspace(lo, hi, n_panels + 1)
    return p_nodes, p_weights, phi, edges


def to_momentum(rs: RadialSolution, p_spec: PSpec | None = None) -> MomentumSolution:
    """Transform a normalized radial state to momentum space.

    Walks the cutoff ladder until the measured norm deficit meets the
    target (or uses the pinned cutoff from p_spec), then renormalizes.
    Raises ConvergenceError when the ladder is exhausted and
    PrecisionLossError when the two quadrature routes disagree on phi.
    """
    spec = p_spec or PSpec()
    target = spec.target_deficit

    base = _LADDER_BASE * rs.conf.Z
    boundaries = _ladder_to(spec.p_max, base) if spec.p_max is not None else [base]
    p_parts, w_parts, phi_parts, edge_parts = [], [], [], []
    rungs = []
    covered = 0.0
    integral = 0.0
    while True:
        while len(p_parts) < len(boundaries):
            hi = boundaries[len(p_parts)]
            pn, wn, phin, en = _segment(rs, covered, hi)
            p_parts.append(pn)
            w_parts.append(wn)
            phi_parts.append(phin)
            edge_parts.append(en)
            integral += float(np.dot(wn, phin * phin * pn * pn))
            covered = hi
        deficit = 1.0 - integral
        rungs.append((covered, deficit))
        if spec.p_max is not None or deficit <= target:
            break
        k = len(boundaries)
        if k > _LADDER_MAX_RUNG:
            raise ConvergenceError(
                f"norm deficit {deficit:.3e} still above {target:.1e} at p_max={covered}"
            )
        boundaries.append(base * 2.0**k)

    p_grid = np.concatenate(p_parts)
    weights = np.concatenate(w_parts)
    raw = np.concatenate(phi_parts)
    deficit = 1.0 - integral
    if deficit < -1e-9:
        raise PrecisionLossError(
            f"momentum norm exceeds unity by {-deficit:.3e}; quadrature inconsistent"
        )
    if spec.p_max is not None and deficit > target:
        raise ConvergenceError(
            f"norm deficit {deficit:.3e} above {target:.1e} at pinned p_max={covered}"
        )

    _cross_check(rs, p_grid, raw)
    scale = math.sqrt(max(integral, 1e-300))
    values = raw / scale

    p_top = covered
    state = {}

    def phi_eval(p):
        """Normalized phi at arbitrary p through an independent fine r-rule.

        The rule only needs to resolve j_l(p r) up to the largest p actually
        requested, which for entropy corrections is far below the ladder
        cutoff; it is rebuilt with doubled headroom if a later call asks
        for more."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        need = float(p.max()) if p.size else 0.0
        if not state or need > state["cap"]:
            cap = min(max(2.0 * need, rs._wave_k), p_top)
            osc = max(cap, rs._wave_k, 1.0 / rs._r_end)
            width = min(0.9 * math.pi / osc, rs._r_end / 32.0)
            rule = composite_rule(
                np.linspace(0.0, rs._r_end, int(math.ceil(rs._r_end / width)) + 1), 10
            )
            state["cap"] = cap
            state["rule"] = rule
            state["aw"] = rule.weights * rs.u(rule.nodes) * rule.nodes
        rule, aw = state["rule"], state["aw"]
        out = np.empty(p.size)
        chunk = max(4, _CHUNK_BUDGET // rule.nodes.size)
        for i0 in range(0, p.size, chunk):
            out[i0 : i0 + chunk] = sph_jl_one(
                rs.qn.l, np.outer(p[i0 : i0 + chunk], rule.nodes)
            ) @ aw
        return math.sqrt(2.0 / math.pi) * out / scale

    return MomentumSolution(
        qn=rs.qn,
        p_grid=p_grid,
        values=values,
        p_max=covered,
        norm_deficit=deficit,
        _weights=weights,
        _raw_values=raw,
        _rungs=tuple(rungs),
        _edges=np.unique(np.concatenate(edge_parts)),
        _phi=phi_eval,
    )


def _ladder_to(p_max: float, base: float) -> list:
    """Ladder boundaries covering (0, p_max], ending exactly at p_max."""
    bounds = []
    b = base
    while b < p_max:
        bounds.append(b)
        b *= 2.0
    bounds.append(p_max)
    return bounds


def _cross_check(rs: RadialSolution, p_grid: np.ndarray, raw: np.ndarray) -> None:
    """Recompute phi on a deterministic subsample through the generic Bessel
    path with a finer, higher-order r-rule; disagreement raises."""
    idx = np.unique(
        np.concatenate([np.arange(0, p_grid.size, 29), [int(np.argmax(np.abs(raw)))]])
    )
    ps = p_grid[idx]
    r_end = rs._r_end
    osc = max(float(ps.max()), rs._wave_k, 1.0 / r_end)
    width = min(0.45 * math.pi / (2.0 * osc), r_end / 32.0)
    rule = composite_rule(np.linspace(0.0, r_end, int(math.ceil(r_end / width)) + 1), 8)
    a_weighted = rule.weights * rs.u(rule.nodes) * rule.nodes
    chunk = max(4, _CHUNK_BUDGET // rule.nodes.size)
    ref = np.empty(ps.size)
    for i0 in range(0, ps.size, chunk):
        ref[i0 : i0 + chunk] = sph_jl_one(
            rs.qn.l, np.outer(ps[i0 : i0 + chunk], rule.nodes)
        ) @ a_weighted
    ref *= math.sqrt(2.0 / math.pi)
    scale = max(float(np.max(np.abs(ref))), 1e-30)
    err = float(np.max(np.abs(raw[idx] - ref))) / scale
    if err > 1e-9:
        raise PrecisionLossError(
            f"transform quadrature routes disagree by {err:.3e} for {rs.qn.label}"
        )


def choose_pmax(rs: RadialSolution, target_deficit: float = 1e-8) -> float:
    """Smallest ladder cutoff whose measured norm deficit meets the target."""
    return to_momentum(rs, PSpec(target_deficit=target_deficit)).p_max


def _gegenbauer(k: int, alpha: float, x: np.ndarray) -> np.ndarray:
    c_prev = np.ones_like(x)
    if k == 0:
        return c_prev
    c_cur = 2.0 * alpha * x
    for j in range(2, k + 1):
        c_prev, c_cur = (
            c_cur,
            (2.0 * x * (j + alpha - 1.0) * c_cur - (j + 2.0 * alpha - 2.0) * c_prev) / j,
        )
    return c_cur


@lru_cache(maxsize=48)
def fha_momentum(qn: QuantumNumbers, Z: float = 1.0) -> MomentumSolution:
    """Closed-form free-ion momentum amplitude (Gegenbauer form).

    At Z = 1,

        phi(p) = [2 (n-l-1)! / (pi (n+l)!)]^(1/2) n**2 2**(2l+2) l!
                 * (n p)**l / (n**2 p**2 + 1)**(l+2)
                 * C_{n-l-1}^{l+1}((n**2 p**2 - 1)/(n**2 p**2 + 1)),

    and general Z rescales as phi_Z(p) = Z**-1.5 phi(p / Z).  Normalized so
    int phi**2 p**2 dp = 1 (the radial-amplitude convention; the uniform
    azimuthal factor is bookkept in the angular module).
    """
    if not Z > 0:
        raise ValidationError(f"Z must be positive, got {Z}")
    n, l = qn.n, qn.l
    k = n - l - 1
    pref = math.sqrt(2.0 * math.factorial(k) / (math.pi * math.factorial(n + l)))
    pref *= n * n * 2.0 ** (2 * l + 2) * math.factorial(l)

    def phi(p):
        p = np.asarray(p, dtype=float) / Z
        np2 = (n * p) ** 2
        val = pref * (n * p) ** l / (np2 + 1.0) ** (l + 2)
        val = val * _gegenbauer(k, l + 1.0, (np2 - 1.0) / (np2 + 1.0))
        return Z**-1.5 * val

    p_scale = Z / n
    p_cut = 10.0 * Z * n
    while float(phi(np.array([p_cut]))[0] ** 2) * p_cut**3 / (2 * l + 3) > 1e-15:
        p_cut *= 1.25
    edges = [0.0]
    x = 1e-3 * p_scale
    while x < p_cut:
        edges.append(x)
        x *= 1.3
    edges.append(p_cut)
    base = np.unique(np.asarray(edges))
    if k > 0:
        # Cut panels at the zeros of phi and grade into each one so the
        # log and cusp singularities of downstream entropy integrands sit
        # at finely resolved panel ends instead of inside wide panels.
        t_roots, _ = roots_gegenbauer(k, l + 1.0)
        p_zero = Z * np.sqrt((1.0 + t_roots) / (1.0 - t_roots)) / n
        parts = [base, p_zero]
        for p0 in np.sort(p_zero):
            i = int(np.searchsorted(base, p0))
            parts.append(graded_edges(float(base[i - 1]), float(p0), "right", 18))
            parts.append(graded_edges(float(p0), float(base[i]), "left", 18))
        base = np.unique(np.concatenate(parts))
    rule = composite_rule(base, 14)
    raw = phi(rule.nodes)
    integral = float(np.dot(rule.weights, raw * raw * rule.nodes**2))
    deficit = 1.0 - integral
    scale = math.sqrt(integral)
    values = raw / scale
    return MomentumSolution(
        qn=qn,
        p_grid=rule.nodes,
        values=values,
        p_max=p_cut,
        norm_deficit=deficit,
        _weights=rule.weights,
        _raw_values=raw,
        _rungs=((p_cut, deficit),),
        _edges=base,
        _phi=lambda p: phi(np.atleast_1d(np.asarray(p, dtype=float))) / scale,
    )
