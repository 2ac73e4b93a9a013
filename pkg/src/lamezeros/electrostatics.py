"""Zeros as equilibria of unit charges among three fixed charges.

At a zero x_i of S the equation reduces to A S'' + B S' = 0, i.e.
sum_{j != i} 2/(x_i - x_j) + sum_l rho_l/(x_i - alpha_l) = 0. That fixes the
interaction as 2 log|x_i - x_j| between movable charges and rho_l log|x_i - alpha_l|
with the fixed ones.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .core import LameSystem, canonical_rescale
from .errors import Collision, NoConvergence

MAX_HALVINGS = 30


@dataclass(frozen=True)
class ChargeConfiguration:
    positions: tuple
    sector: int

    def __post_init__(self):
        p = tuple(float(x) for x in self.positions)
        if any(b <= a for a, b in zip(p, p[1:])):
            raise Collision("positions must be strictly increasing")
        object.__setattr__(self, "positions", p)

    @property
    def k(self) -> int:
        return len(self.positions)


def _pos(config) -> np.ndarray:
    if isinstance(config, ChargeConfiguration):
        return np.array(config.positions)
    return np.asarray(config, dtype=float)


def _check(x: np.ndarray, system: LameSystem):
    tiny = 4 * np.finfo(float).eps * max(system.span, np.max(np.abs(x), initial=0.0))
    if x.size > 1 and np.min(np.abs(np.diff(np.sort(x)))) <= tiny:
        raise Collision("two charges coincide")
    if np.min(np.abs(x[:, None] - np.array(system.alpha)[None, :])) <= tiny:
        raise Collision("a charge sits on a fixed abscissa")


def equilibrium_residual(config, system: LameSystem) -> np.ndarray:
    """Force vector F_i; vanishes exactly at a Stieltjes zero set."""
    x = _pos(config)
    _check(x, system)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, np.inf)
    f = (2.0 / d).sum(axis=1)
    for a, r in zip(system.alpha, system.rho):
        f += r / (x - a)
    return f


def energy(config, system: LameSystem) -> float:
    """W = -sum_{i<j} 2 log|x_i - x_j| - sum_i sum_l rho_l log|x_i - alpha_l|."""
    x = _pos(config)
    _check(x, system)
    iu = np.triu_indices(x.size, 1)
    w = -2.0 * np.log(np.abs(x[:, None] - x[None, :])[iu]).sum()
    for a, r in zip(system.alpha, system.rho):
        w -= r * np.log(np.abs(x - a)).sum()
    return float(w)


def energy_hessian(config, system: LameSystem) -> np.ndarray:
    x = _pos(config)
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, np.inf)
    h = -2.0 / d**2
    diag = -h.sum(axis=1)
    for a, r in zip(system.alpha, system.rho):
        diag += r / (x - a) ** 2
    np.fill_diagonal(h, diag)
    return h


def _feasible(x, m, alpha) -> bool:
    a1, a2, a3 = alpha
    if np.any(np.diff(x) <= 0):
        return False
    left, right = x[:m], x[m:]
    return bool(np.all(left > a1) and np.all(left < a2) and np.all(right > a2) and np.all(right < a3))


def _cheb_interior(a, b, n):
    if n == 0:
        return np.empty(0)
    t = np.cos(np.pi * (2 * np.arange(n, 0, -1) - 1) / (2 * n))
    return 0.5 * (a + b) + 0.5 * (b - a) * t


def solve_sector(system: LameSystem, k: int, m: int, max_iter: int = 200) -> ChargeConfiguration:
    """Equilibrium with m charges in (alpha1, alpha2) and k-m in (alpha2, alpha3).

    Damped Newton on W in the canonical frame, starting from Chebyshev points of
    each subinterval; steps are halved until they stay ordered, inside the sector
    and decrease W (or, at rounding level, the residual).
    """
    if not 0 <= m <= k or k < 1:
        raise ValueError(f"sector {m} invalid for degree {k}")
    canon, frame = canonical_rescale(system)
    a1, a2, a3 = canon.alpha
    x = np.concatenate([_cheb_interior(a1, a2, m), _cheb_interior(a2, a3, k - m)])
    w = energy(x, canon)
    f = equilibrium_residual(x, canon)
    best = np.max(np.abs(f))
    for _ in range(max_iter):
        h = energy_hessian(x, canon)
        step = cho_solve(cho_factor(h), f)
        t = 1.0
        for _ in range(MAX_HALVINGS):
            xn = x + t * step
            if _feasible(xn, m, canon.alpha):
                wn = energy(xn, canon)
                fn = equilibrium_residual(xn, canon)
                if wn <= w or np.max(np.abs(fn)) < np.max(np.abs(f)):
                    break
            t *= 0.5
        else:
            break
        x, w, f = xn, wn, fn
        best = min(best, np.max(np.abs(f)))
        if np.max(np.abs(t * step)) <= 4e-16:
            return ChargeConfiguration(tuple(np.sort(frame.inverse(x))), m)
    raise NoConvergence(f"sector solve k={k} m={m} did not converge", best / frame.u)


def configurations_csv(configs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    kmax = max(c.k for c in configs)
    w.writerow(["k", "m"] + [f"x{i}" for i in range(1, kmax + 1)])
    for c in configs:
        w.writerow([c.k, c.sector] + [format(p, ".17g") for p in c.positions])
    return buf.getvalue()
