"""Product orthogonality on the rectangle (a1,a2) x (a2,a3) and recurrence fits.

The two-variable weight prod_j prod_k |x_k - a_j|^(r_j - 1) (x2 - x1) splits
into one-dimensional factors once x2 - x1 is written as (x2 - a2) + (a2 - x1),
so the tensor Gauss-Jacobi rule reduces to four one-dimensional sums. For a
square integrand both resulting terms are positive, so nothing cancels.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import jk_sequence
from .core import DensePolynomial, LameSystem
from .errors import BadExponent, DegreeMismatch, ShortSequence
from .quadrature import integrate_graded
from .spectrum import van_vleck_spectrum
from .zeros import StieltjesSolution, solve_label

PRODUCT_NODES = 64


def _weighted_moments(system: LameSystem, f, nodes: int):
    """Integrals of f and (x - a2) f over each side of the rectangle, with weight."""
    r1, r2, r3 = system.rho
    if min(r1, r2, r3) <= 0:
        raise BadExponent("charges must be positive")
    a1, a2, a3 = system.alpha
    left = lambda x: f(x) * (a3 - x) ** (r3 - 1.0)
    right = lambda x: f(x) * (x - a1) ** (r1 - 1.0)
    g = dict(right_gap=a3 - a2)
    h = dict(left_gap=a2 - a1)
    m0 = integrate_graded(left, a1, a2, r1 - 1.0, r2 - 1.0, nodes, **g)
    m1 = integrate_graded(lambda x: (a2 - x) * left(x), a1, a2, r1 - 1.0, r2 - 1.0, nodes, **g)
    n0 = integrate_graded(right, a2, a3, r2 - 1.0, r3 - 1.0, nodes, **h)
    n1 = integrate_graded(lambda x: (x - a2) * right(x), a2, a3, r2 - 1.0, r3 - 1.0, nodes, **h)
    return m0, m1, n0, n1


def product_orthogonality_integral(system: LameSystem, solN: StieltjesSolution, solM: StieltjesSolution,
                                   nodes: int = PRODUCT_NODES) -> float:
    """Double integral of S_n(x1)S_n(x2) S_m(x1)S_m(x2) against the rectangle weight."""
    f = lambda x: solN.values(x) * solM.values(x)
    m0, m1, n0, n1 = _weighted_moments(system, f, nodes)
    return m0 * n1 + m1 * n0


def normalized_product_integral(system: LameSystem, solN, solM, nodes: int = PRODUCT_NODES) -> float:
    inn = product_orthogonality_integral(system, solN, solN, nodes)
    imm = product_orthogonality_integral(system, solM, solM, nodes)
    return product_orthogonality_integral(system, solN, solM, nodes) / math.sqrt(inn * imm)


@dataclass(frozen=True)
class RecurrenceFit:
    """Best (a, b) in S_n - (x - a) S_{n-1} + b S_{n-2} ~ 0 (coefficient 2-norm)."""

    n: int
    a_n: float
    b_n: float
    residual_norm: float

    def to_dict(self) -> dict:
        return {"n": self.n, "a_n": self.a_n, "b_n": self.b_n, "residual_norm": self.residual_norm}


def _monic(p, degree: int) -> np.ndarray:
    if isinstance(p, StieltjesSolution):
        c = p.coeffs.coefficients
    elif isinstance(p, DensePolynomial):
        c = p.coefficients
    else:
        c = np.asarray(p, dtype=float)
    c = np.asarray(c, dtype=float)
    if c.size - 1 != degree:
        raise DegreeMismatch(f"expected degree {degree}, got {c.size - 1}")
    if c[-1] != 1.0:
        c = c / c[-1]
    return c


def recurrence_fit(seq, n: int) -> RecurrenceFit:
    """Closed-form 2x2 normal equations; seq[i] must have degree i."""
    if n < 2 or len(seq) <= n:
        raise ShortSequence(f"need entries 0..{n}, have {len(seq)}")
    sn, s1, s2 = _monic(seq[n], n), _monic(seq[n - 1], n - 1), _monic(seq[n - 2], n - 2)
    c = sn.copy()
    c[1:] -= s1
    u = np.zeros(n + 1)
    u[:n] = s1
    v = np.zeros(n + 1)
    v[: n - 1] = s2
    guu, guv, gvv = u @ u, u @ v, v @ v
    ru, rv = -(u @ c), -(v @ c)
    det = guu * gvv - guv * guv
    a = (ru * gvv - rv * guv) / det
    b = (guu * rv - guv * ru) / det
    return RecurrenceFit(n, float(a), float(b), float(np.linalg.norm(c + a * u + b * v)))


def chebyshev_control(N: int) -> list:
    """Monic Chebyshev polynomials T_0..T_N (coefficients exact in binary)."""
    out = []
    for n in range(N + 1):
        c = np.polynomial.chebyshev.cheb2poly([0.0] * n + [1.0])
        out.append(c / c[-1])
    return out


def theta_sequence(system: LameSystem, theta: float, N: int) -> list:
    """[1, S_{j_1}^(1), ..., S_{j_N}^(N)] with j_k from theta."""
    seq = [DensePolynomial([1.0])]
    for k in range(1, N + 1):
        seq.append(solve_label(van_vleck_spectrum(system, k), jk_sequence(theta, k)))
    return seq


@dataclass
class OrthogonalityReport:
    system: LameSystem
    theta: float
    N: int
    labels: list
    fits: list
    products: list = field(default_factory=list)

    @property
    def max_normalized_product(self) -> float:
        return max((abs(v) for n, m, v in self.products if n != m), default=0.0)

    @property
    def max_residual(self) -> float:
        return max(f.residual_norm for f in self.fits)

    def to_json(self) -> str:
        return json.dumps({
            "system": self.system.to_dict(),
            "theta": self.theta,
            "N": self.N,
            "labels": self.labels,
            "fits": [f.to_dict() for f in self.fits],
            "products": [{"n": n, "m": m, "normalized": v} for n, m, v in self.products],
        }, sort_keys=True)

    def table(self) -> str:
        lines = [f"theta={self.theta:.17g} N={self.N}", "n  j  a_n  b_n  residual"]
        for f, j in zip(self.fits, self.labels[1:]):
            lines.append(f"{f.n} {j} {f.a_n:.17g} {f.b_n:.17g} {f.residual_norm:.17g}")
        lines.append(f"max normalized cross integral {self.max_normalized_product:.17g}")
        return "\n".join(lines)


def orthogonality_report(system: LameSystem, theta: float, N: int, nodes: int = PRODUCT_NODES) -> OrthogonalityReport:
    if N < 4:
        raise ShortSequence(f"N={N} < 4")
    seq = theta_sequence(system, theta, N)
    labels = [jk_sequence(theta, k) for k in range(1, N + 1)]
    fits = [recurrence_fit(seq, n) for n in range(2, N + 1)]
    diag = {k: product_orthogonality_integral(system, seq[k], seq[k], nodes) for k in range(1, N + 1)}
    products = []
    for n in range(1, N + 1):
        for m in range(n + 1, N + 1):
            val = product_orthogonality_integral(system, seq[n], seq[m], nodes)
            products.append((n, m, val / math.sqrt(diag[n] * diag[m])))
    return OrthogonalityReport(system, theta, N, [1] + labels, fits, products)
