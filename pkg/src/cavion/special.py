"""Special functions and quadrature rules used by every other module.

Provides the Kummer confluent hypergeometric function 1F1, associated
Legendre polynomials, spherical Bessel functions j_l, and Gauss-Legendre
panel quadrature.  All functions are pure and safe to call from multiple
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import PrecisionLossError, ValidationError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "composite_rule",
    "graded_edges",
    "kummer_1f1",
    "assoc_legendre",
    "spherical_bessel_j",
    "sph_jl_many",
    "double_factorial",
]

# Relative accuracy budget for kummer_1f1; above this estimated cancellation
# the series result is discarded and mpmath recomputes at higher precision.
_KUMMER_TOL = 1.0e-12
# Ascending 1F1 series terms overflow float64 near x ~ 700.
_KUMMER_SERIES_XMAX = 650.0


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a quadrature rule on some interval.

    For a Gauss-Legendre rule on [a, b] the weights sum to b - a and
    polynomials of degree <= 2N-1 integrate exactly (to roundoff).
    """

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self) -> int:
        return len(self.nodes)


@lru_cache(maxsize=128)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Legendre rule with n nodes mapped to [a, b].

    Parameters
    ----------
    n : int
        Number of nodes, n >= 2.
    a, b : float
        Interval endpoints, a < b.

    Returns
    -------
    QuadratureRule
        Rule exact for polynomials of degree <= 2n - 1 on [a, b].
    """
    if n < 2:
        raise ValidationError(f"gauss_legendre needs n >= 2, got {n}")
    if not a < b:
        raise ValidationError(f"gauss_legendre needs a < b, got [{a}, {b}]")
    x, w = _leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return QuadratureRule(mid + half * x, half * w)


def composite_rule(edges, n: int) -> QuadratureRule:
    """Concatenated n-point Gauss-Legendre panels between consecutive edges."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise ValidationError("composite_rule needs strictly increasing edges")
    x, w = _leggauss(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule(nodes, weights)


def graded_edges(a: float, b: float, toward: str, levels: int, ratio: float = 0.5):
    """Panel edges on [a, b] geometrically graded toward one endpoint.

    Used to absorb |x - x0|^s endpoint singularities (s > 0) of entropy
    integrands at density zeros: successive panels shrink by `ratio`
    toward the singular end, leaving an unresolved sliver of relative
    width ratio**levels whose contribution is O(width^(s+1)).
    """
    if toward not in ("left", "right"):
        raise ValidationError("toward must be 'left' or 'right'")
    fracs = ratio ** np.arange(levels, 0, -1)          # increasing, last < 1
    cuts = np.concatenate(([0.0], fracs, [1.0]))
    if toward == "left":
        return a + (b - a) * cuts
    return b - (b - a) * cuts[::-1]


def double_factorial(n: int) -> int:
    """n!! for n >= -1 (with (-1)!! = 0!! = 1)."""
    if n < -1:
        raise ValidationError(f"double_factorial undefined for n={n}")
    out = 1
    for k in range(n, 1, -2):
        out *= k
    return out


def kummer_1f1(a: float, b: float, x: float) -> float:
    """Confluent hypergeometric function 1F1(a; b; x) for real arguments.

    Ascending series with compensated summation; the running maximum term
    provides a cancellation estimate, and evaluation falls back to mpmath
    when the estimated relative error exceeds 1e-12.  Intended domain is
    x >= 0 with moderate x (the quantization condition in this package
    produces x <= a few hundred).

    Raises
    ------
    ValidationError
        If b is a non-positive integer (poles of 1F1).
    PrecisionLossError
        If neither the series nor the fallback can certify the tolerance.
    """
    if b <= 0 and b == math.floor(b):
        raise ValidationError(f"kummer_1f1 pole: b={b} is a non-positive integer")
    if x == 0.0:
        return 1.0
    if abs(x) > _KUMMER_SERIES_XMAX:
        return _kummer_mpmath(a, b, x, dps=int(16 + 0.5 * abs(x) / math.log(10)))

    # Polynomial case: the series terminates once (a)_k hits zero.
    total = 1.0
    comp = 0.0                       # Kahan compensation
    term = 1.0
    max_term = 1.0
    k = 0
    while True:
        term *= (a + k) * x / ((b + k) * (k + 1))
        k += 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        at = abs(term)
        if at > max_term:
            max_term = at
        if at <= 1e-18 * max(1.0, abs(total)) or term == 0.0:
            break
        if k > 10_000:
            raise PrecisionLossError(
                f"kummer_1f1 series did not converge for a={a}, b={b}, x={x}"
            )

    # eps * max_term bounds the roundoff left in the compensated sum.
    if total != 0.0 and 2.3e-16 * max_term / abs(total) < _KUMMER_TOL:
        return total
    if a <= 0 and a == math.floor(a):
        # Terminating polynomial; the value may be an exact zero, which
        # mpmath's adaptive hypsum refuses, so sum the terms directly.
        return _kummer_terminating(a, b, x)
    digits_lost = math.log10(max_term / abs(total)) if total != 0.0 else 16.0
    return _kummer_mpmath(a, b, x, dps=int(20 + digits_lost))


def _kummer_terminating(a: float, b: float, x: float, dps: int = 60) -> float:
    with mpmath.workdps(dps):
        am, bm, xm = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(x)
        total = term = mpmath.mpf(1)
        for k in range(int(-a)):
            term *= (am + k) * xm / ((bm + k) * (k + 1))
            total += term
        return float(total)


def _kummer_mpmath(a: float, b: float, x: float, dps: int) -> float:
    with mpmath.workdps(min(max(dps, 20), 300)):
        return float(mpmath.hyp1f1(a, b, x))


def assoc_legendre(l: int, m: int, u: float) -> float:
    """Associated Legendre polynomial P_l^m(u) (Condon-Shortley phase).

    Stable for l <= 15 via the standard degree recurrence seeded at
    P_m^m = (-1)^m (2m-1)!! (1-u^2)^{m/2}.  Negative m handled through
    the reflection formula.
    """
    if abs(m) > l or l < 0:
        raise ValidationError(f"assoc_legendre needs |m| <= l, got l={l}, m={m}")
    if abs(u) > 1.0:
        raise ValidationError(f"assoc_legendre needs |u| <= 1, got u={u}")
    if m < 0:
        m = -m
        scale = (-1.0) ** m * math.factorial(l - m) / math.factorial(l + m)
    else:
        scale = 1.0

    pmm = (-1.0) ** m * double_factorial(2 * m - 1) * (1.0 - u * u) ** (m / 2.0)
    if l == m:
        return scale * pmm
    pm1 = u * (2 * m + 1) * pmm
    if l == m + 1:
        return scale * pm1
    for k in range(m + 2, l + 1):
        pmm, pm1 = pm1, (u * (2 * k - 1) * pm1 - (k + m - 1) * pmm) / (k - m)
    return scale * pm1


def spherical_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel function j_l(x) for x >= 0.

    Small-x ascending series (no cancellation, j_l ~ x^l/(2l+1)!!),
    upward recurrence for x >= l, Miller-type downward recurrence in the
    remaining band.
    """
    if l < 0:
        raise ValidationError(f"spherical_bessel_j needs l >= 0, got {l}")
    if x < 0:
        raise ValidationError(f"spherical_bessel_j needs x >= 0, got {x}")
    return float(sph_jl_many(l, np.array([x]))[l][0])


def _jl_series(l: int, x: np.ndarray) -> np.ndarray:
    # Ascending series in x^2; mild term growth for x up to ~l keeps it
    # cancellation-free there.  x**l with x=0, l=0 is 1.0 under numpy,
    # which is the correct j_0(0) limit.
    x2 = x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        term = term * (-x2) / (2.0 * k * (2 * k + 2 * l + 1))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    return x**l / double_factorial(2 * l + 1) * total


def sph_jl_many(lmax: int, x: np.ndarray) -> np.ndarray:
    """j_0..j_lmax on an array of points, shape (lmax+1, len(x)).

    Vectorized with the same regime switches as the scalar routine:
    upward recurrence where x >= max(lmax, 2), ascending series elsewhere
    (the series replaces Miller's downward recurrence; for x below the
    turning point it converges with only mild term growth).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((lmax + 1, x.size))
    flat = x.ravel()

    up = flat >= max(lmax, 2.0) - 0.5
    lo = ~up

    if np.any(up):
        xs = flat[up]
        j0 = np.sin(xs) / xs
        out_up = np.empty((lmax + 1, xs.size))
        out_up[0] = j0
        if lmax >= 1:
            out_up[1] = np.sin(xs) / xs**2 - np.cos(xs) / xs
        for k in range(2, lmax + 1):
            out_up[k] = (2 * k - 1) / xs * out_up[k - 1] - out_up[k - 2]
        out[:, up] = out_up

    if np.any(lo):
        xs = flat[lo]
        for k in range(lmax + 1):
            out[k, lo] = _jl_series(k, xs)

    return out


def sph_jl_one(l: int, x: np.ndarray) -> np.ndarray:
    """j_l on an array, holding only two recurrence rows in memory.

    Same regime switch as sph_jl_many, so both produce identical values;
    meant for the large outer-product arguments of radial transforms.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty_like(flat)
    up = flat >= max(l, 2.0) - 0.5
    lo = ~up
    if np.any(up):
        xs = flat[up]
        jm = np.sin(xs) / xs
        if l == 0:
            out[up] = jm
        else:
            jc = np.sin(xs) / xs**2 - np.cos(xs) / xs
            for k in range(2, l + 1):
                jm, jc = jc, (2 * k - 1) / xs * jc - jm
            out[up] = jc
    if np.any(lo):
        out[lo] = _jl_series(l, flat[lo])
    return out.reshape(x.shape)
