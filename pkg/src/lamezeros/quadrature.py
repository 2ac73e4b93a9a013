"""Gauss-Jacobi rules and endpoint-singular integration."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln

from .errors import BadExponent

DEFAULT_NODES = 64
MAX_NODES = 4096


@dataclass(frozen=True)
class JacobiRule:
    """n-point rule for the weight (x-a)^p (b-x)^q on (a, b)."""

    a: float
    b: float
    p: float
    q: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.nodes.size

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=512)
def _reference_rule(p: float, q: float, n: int):
    """Golub-Welsch on [-1, 1] for the weight (1+t)^p (1-t)^q."""
    # Jacobi polynomials P^(alpha, beta) use (1-t)^alpha (1+t)^beta
    al, be = q, p
    k = np.arange(n, dtype=float)
    s = 2 * k + al + be
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (be**2 - al**2) / (s * (s + 2))
    diag[0] = (be - al) / (al + be + 2)
    kk = np.arange(1, n, dtype=float)
    s1 = 2 * kk + al + be
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * kk * (kk + al) * (kk + be) * (kk + al + be) / (s1**2 * (s1 + 1) * (s1 - 1))
    if n > 1:
        # k = 1 with the common factor (1 + al + be) cancelled
        off2[0] = 4 * (1 + al) * (1 + be) / ((2 + al + be) ** 2 * (3 + al + be))
    off = np.sqrt(off2)
    t, v = eigh_tridiagonal(diag, off)
    log_mass = (al + be + 1) * np.log(2.0) + betaln(al + 1, be + 1)
    w = np.exp(log_mass) * v[0, :] ** 2
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def jacobi_rule(a: float, b: float, p: float, q: float, n: int = DEFAULT_NODES) -> JacobiRule:
    if p <= -1 or q <= -1:
        raise BadExponent(f"exponents must exceed -1, got p={p}, q={q}")
    if n < 1:
        raise ValueError("need at least one node")
    if not a < b:
        raise ValueError("need a < b")
    t, w = _reference_rule(float(p), float(q), int(n))
    half = 0.5 * (b - a)
    x = a + half * (t + 1.0)
    return JacobiRule(a, b, p, q, x, w * half ** (p + q + 1))


def integrate_singular(f_smooth, a: float, b: float, p: float, q: float, n: int = DEFAULT_NODES) -> float:
    """Integral of (x-a)^p (b-x)^q f_smooth(x) over (a, b) with an n-point rule."""
    return jacobi_rule(a, b, p, q, n).integrate(f_smooth)


def graded_panels(a: float, b: float, left_gap: float | None = None, right_gap: float | None = None):
    """Breakpoints refining geometrically toward an end whose smooth factor has a
    nearby branch point (distance `gap` outside the interval)."""
    pts = [a, b]
    width = b - a
    if right_gap is not None and 0 < right_gap < 0.5 * width:
        d = right_gap
        while d < 0.5 * width:
            pts.append(b - d)
            d *= 2.0
    if left_gap is not None and 0 < left_gap < 0.5 * width:
        d = left_gap
        while d < 0.5 * width:
            pts.append(a + d)
            d *= 2.0
    return np.unique(pts)


def integrate_graded(f_smooth, a: float, b: float, p: float, q: float, n: int = 32,
                     left_gap: float | None = None, right_gap: float | None = None) -> float:
    """Endpoint-singular integral with geometric panels near a close branch point.

    The end panels keep the Jacobi weight; interior panels fold the (now smooth)
    weight into the integrand and use Gauss-Legendre.
    """
    br = graded_panels(a, b, left_gap, right_gap)
    if br.size == 2:
        return integrate_singular(f_smooth, a, b, p, q, n)
    total = 0.0
    last = br.size - 2
    for i, (lo, hi) in enumerate(zip(br[:-1], br[1:])):
        pp = p if i == 0 else 0.0
        qq = q if i == last else 0.0

        def g(x, pp=pp, qq=qq):
            out = f_smooth(x)
            if pp == 0.0 and p != 0.0:
                out = out * (x - a) ** p
            if qq == 0.0 and q != 0.0:
                out = out * (b - x) ** q
            return out

        total += integrate_singular(g, lo, hi, pp, qq, n)
    return total


def integrate_converged(integrator, n: int = DEFAULT_NODES, rtol: float = 1e-12, atol: float = 1e-15,
                        max_n: int = MAX_NODES):
    """Double n until |I_2n - I_n| <= rtol |I_2n| + atol; returns (value, n_used, change)."""
    prev = integrator(n)
    while True:
        cur = integrator(2 * n)
        change = abs(cur - prev)
        if change <= rtol * abs(cur) + atol or 2 * n >= max_n:
            return cur, 2 * n, change
        n *= 2
        prev = cur
