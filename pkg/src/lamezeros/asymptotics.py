"""Limit densities of Van Vleck zeros and of Stieltjes zeros, and the theta <-> nu map.

Every density is written on each support piece (a, b) as
(x-a)^p (b-x)^q g(x) with g analytic on the closed piece, so Gauss-Jacobi
rules (graded toward an end when a branch point of g sits close outside it)
converge geometrically. All radicands are products that are positive on the
domain where they are used; this is asserted at the quadrature nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.stats import kstest

from .core import LameSystem
from .errors import EmptySample, OutOfRange, OutOfSupport
from .quadrature import integrate_converged, integrate_graded

PANEL_NODES = 64
TABLE_POINTS = 512


def _sqrt_pos(v):
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise OutOfSupport("radicand not positive on the integration domain")
    return np.sqrt(v)


@dataclass(frozen=True)
class Piece:
    """Support piece carrying (x-a)^p (b-x)^q g(x)."""

    a: float
    b: float
    p: float
    q: float
    g: Callable = field(repr=False)
    left_gap: float | None = None
    right_gap: float | None = None

    def integral(self, n: int | None = None) -> float:
        """Full integral; with n=None the node count doubles from 64 until self-convergence."""
        if n is not None:
            return integrate_graded(self.g, self.a, self.b, self.p, self.q, n, self.left_gap, self.right_gap)
        return integrate_converged(self.integral, PANEL_NODES)[0]

    def partial(self, x: float, n: int = PANEL_NODES) -> float:
        """Integral from a to x."""
        if x <= self.a:
            return 0.0
        if x >= self.b:
            return self.integral(n)
        b, q, g = self.b, self.q, self.g

        def f(t):
            out = g(t)
            return out * (b - t) ** q if q else out

        gaps = [b - x] + ([self.right_gap + (b - x)] if self.right_gap else [])
        return integrate_graded(f, self.a, x, self.p, 0.0, n, self.left_gap, min(gaps))


def theta_c(system: LameSystem) -> float:
    a1, a2, a3 = system.alpha
    return 2.0 / math.pi * math.asin(math.sqrt((a2 - a1) / (a3 - a1)))


def _stieltjes_pieces(system: LameSystem, nu: float):
    a1, a2, a3 = system.alpha
    inv = 1.0 / math.pi
    pieces = []
    if nu > a1:
        if nu > a2:
            pieces.append(Piece(a1, a2, -0.5, -0.5, lambda x: inv * _sqrt_pos((nu - x) / (a3 - x)),
                                right_gap=nu - a2))
        elif nu < a2:
            pieces.append(Piece(a1, nu, -0.5, 0.5, lambda x: inv / _sqrt_pos((a2 - x) * (a3 - x)),
                                right_gap=a2 - nu))
        else:
            pieces.append(Piece(a1, a2, -0.5, 0.0, lambda x: inv / _sqrt_pos(a3 - x), right_gap=a3 - a2))
    if nu < a3:
        if nu < a2:
            pieces.append(Piece(a2, a3, -0.5, -0.5, lambda x: inv * _sqrt_pos((x - nu) / (x - a1)),
                                left_gap=a2 - nu))
        elif nu > a2:
            pieces.append(Piece(nu, a3, 0.5, -0.5, lambda x: inv / _sqrt_pos((x - a1) * (x - a2)),
                                left_gap=nu - a2))
        else:
            pieces.append(Piece(a2, a3, 0.0, -0.5, lambda x: inv / _sqrt_pos(x - a1), left_gap=a2 - a1))
    return pieces


def theta_from_nu(system: LameSystem, nu: float) -> float:
    """(1/pi) * integral over (alpha1, min(alpha2, nu)) of sqrt|(nu-x)/A(x)|."""
    a1, _, a3 = system.alpha
    if not a1 <= nu <= a3:
        raise OutOfRange(f"nu={nu} outside [alpha1, alpha3]")
    if nu == a1:
        return 0.0
    return _stieltjes_pieces(system, nu)[0].integral()


def nu_from_theta(system: LameSystem, theta: float) -> float:
    """Invert theta_from_nu by bisection down to adjacent doubles."""
    a1, _, a3 = system.alpha
    if not 0.0 <= theta <= 1.0:
        raise OutOfRange(f"theta={theta} outside [0, 1]")
    if theta == 0.0:
        return a1
    if theta == 1.0:
        return a3
    lo, hi = a1, a3
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if theta_from_nu(system, mid) < theta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def jk_sequence(theta: float, k: int) -> int:
    """Label ceil(k theta + 1) clamped to 1..k+1."""
    if not 0.0 <= theta <= 1.0:
        raise OutOfRange(f"theta={theta} outside [0, 1]")
    return int(min(max(math.ceil(k * theta + 1), 1), k + 1))


def rho_S(system: LameSystem, nu: float, x):
    """(1/pi) sqrt((nu-x)/A(x)) off the gap between alpha2 and nu; 0 inside it."""
    a1, a2, a3 = system.alpha
    x = np.asarray(x, dtype=float)
    lo, hi = min(a2, nu), max(a2, nu)
    in_gap = (x >= lo) & (x <= hi)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.sqrt(np.abs((nu - x) / system.A(x))) / math.pi
    out = np.where(in_gap | (x <= a1) | (x >= a3), 0.0, val)
    return float(out) if out.ndim == 0 else out


def _rho_v_scalar(system: LameSystem, x: float, n: int = PANEL_NODES) -> float:
    a1, a2, a3 = system.alpha
    inv = 0.5 / math.pi
    if a1 < x < a2:
        g = lambda s: inv / _sqrt_pos((s - a1) * (s - x))
        return integrate_graded(g, a2, a3, -0.5, -0.5, n, left_gap=min(a2 - x, a2 - a1))
    if a2 < x < a3:
        g = lambda s: inv / _sqrt_pos((a3 - s) * (x - s))
        return integrate_graded(g, a1, a2, -0.5, -0.5, n, right_gap=min(x - a2, a3 - a2))
    raise OutOfSupport(f"x={x} must lie in (alpha1, alpha3) away from alpha2")


def rho_V(system: LameSystem, x, n: int = PANEL_NODES):
    """Limit density of Van Vleck zeros (one-dimensional integral per point)."""
    if np.ndim(x) == 0:
        return _rho_v_scalar(system, float(x), n)
    return np.array([_rho_v_scalar(system, float(t), n) for t in np.asarray(x, dtype=float)])


def _cdf_v_direct(system: LameSystem, x: float, n: int = PANEL_NODES) -> float:
    """CDF of the Van Vleck density, integrated in closed order (single integrals)."""
    a1, a2, a3 = system.alpha
    if x <= a1:
        return 0.0
    if x >= a3:
        x = a3
    inv = 1.0 / math.pi
    if x <= a2:
        if x == a2:
            g = lambda s: 1.0 / _sqrt_pos(s - a1)
            val = integrate_graded(g, a2, a3, 0.0, -0.5, n, left_gap=a2 - a1)
        else:
            g = lambda s: _sqrt_pos((s - x) / (s - a1))
            val = integrate_graded(g, a2, a3, -0.5, -0.5, n, left_gap=min(a2 - x, a2 - a1))
        return 1.0 - inv * val
    left = _cdf_v_direct(system, a2, n)
    if x == a3:
        g1 = lambda s: np.ones_like(s)
        first = integrate_graded(g1, a1, a2, -0.5, -0.5, n)
    else:
        g1 = lambda s: _sqrt_pos((x - s) / (a3 - s))
        first = integrate_graded(g1, a1, a2, -0.5, -0.5, n, right_gap=min(x - a2, a3 - a2))
    g2 = lambda s: 1.0 / _sqrt_pos(a3 - s)
    second = integrate_graded(g2, a1, a2, -0.5, 0.0, n, right_gap=a3 - a2)
    return left + inv * (first - second)


@dataclass(frozen=True)
class DensityModel:
    """A limit density with quadrature-backed CDF and a cached monotone table.

    kind is "vanvleck" or "stieltjes"; nu is required for the latter.
    """

    kind: str
    system: LameSystem
    nu: float | None = None
    _table: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("vanvleck", "stieltjes"):
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "stieltjes":
            a1, _, a3 = self.system.alpha
            if self.nu is None or not a1 <= self.nu <= a3:
                raise OutOfRange("Stieltjes density needs nu in [alpha1, alpha3]")
        object.__setattr__(self, "_table", self._build_table())

    def support(self) -> list:
        a1, a2, a3 = self.system.alpha
        if self.kind == "vanvleck":
            return [(a1, a2), (a2, a3)]
        return [(p.a, p.b) for p in _stieltjes_pieces(self.system, self.nu)]

    def density(self, x):
        if self.kind == "vanvleck":
            return rho_V(self.system, x)
        return rho_S(self.system, self.nu, x)

    def piece_masses(self) -> list:
        if self.kind == "vanvleck":
            a2 = self.system.alpha[1]
            total = lambda n: _cdf_v_direct(self.system, self.system.alpha[2], n)
            left = integrate_converged(lambda n: _cdf_v_direct(self.system, a2, n), PANEL_NODES)[0]
            return [left, integrate_converged(total, PANEL_NODES)[0] - left]
        return [p.integral() for p in _stieltjes_pieces(self.system, self.nu)]

    def mass(self) -> float:
        return float(sum(self.piece_masses()))

    def cdf_direct(self, x: float) -> float:
        """CDF by quadrature at a single point."""
        if self.kind == "vanvleck":
            return _cdf_v_direct(self.system, x)
        total = 0.0
        for p in _stieltjes_pieces(self.system, self.nu):
            total += p.partial(x)
        return total

    def _build_table(self):
        table = []
        offset = 0.0
        phi = np.linspace(0.0, math.pi, TABLE_POINTS)
        for (a, b) in self.support():
            xs = a + 0.5 * (b - a) * (1.0 - np.cos(phi))
            xs[0], xs[-1] = a, b
            vals = np.array([self.cdf_direct(float(t)) for t in xs])
            vals = np.maximum.accumulate(vals)
            table.append((a, b, PchipInterpolator(phi, vals), float(vals[0]), float(vals[-1])))
            offset = vals[-1]
        del offset
        return tuple(table)

    def cdf(self, x):
        """Cached CDF: monotone interpolation in the angle variable of each piece."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xs)
        for a, b, interp, lo, hi in self._table:
            out = np.where(xs >= b, hi, out)
            inside = (xs > a) & (xs < b)
            if np.any(inside):
                t = np.clip((2.0 * xs[inside] - a - b) / (b - a), -1.0, 1.0)
                out[inside] = interp(np.arccos(-t))
        out = np.clip(out, 0.0, None)
        return float(out[0]) if np.ndim(x) == 0 else out


def ks_distance(samples, model: DensityModel) -> float:
    """sup |empirical CDF - model CDF| over the sample points (two-sided)."""
    s = np.sort(np.asarray(samples, dtype=float))
    if s.size == 0:
        raise EmptySample("no samples")
    a1, _, a3 = model.system.alpha
    if s[0] <= a1 or s[-1] >= a3:
        raise OutOfSupport("samples must lie inside (alpha1, alpha3)")
    return float(kstest(s, model.cdf).statistic)


def vanvleck_ladder(system: LameSystem, ks, model: DensityModel | None = None) -> list:
    from .spectrum import van_vleck_spectrum

    model = model or DensityModel("vanvleck", system)
    return [(k, ks_distance(van_vleck_spectrum(system, k).nus, model)) for k in ks]


def stieltjes_ladder(system: LameSystem, theta: float, ks, model: DensityModel | None = None) -> list:
    """KS distances of the zeros of S_{j_k}^(k) to the limit density for nu(theta)."""
    from .spectrum import van_vleck_spectrum
    from .zeros import solve_label

    model = model or DensityModel("stieltjes", system, nu_from_theta(system, theta))
    out = []
    for k in ks:
        sol = solve_label(van_vleck_spectrum(system, k), jk_sequence(theta, k))
        out.append((k, ks_distance(sol.zeros, model)))
    return out
