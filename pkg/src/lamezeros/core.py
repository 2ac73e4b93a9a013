"""Problem instance, dense polynomials, the coupling constant and the canonical frame."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DuplicateAbscissa, NonpositiveCharge

try:  # python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LameSystem:
    """Three ordered abscissas and their positive charges."""

    alpha: tuple
    rho: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        r = tuple(float(x) for x in self.rho)
        if len(a) != 3 or len(r) != 3:
            raise ValueError("need exactly three abscissas and three charges")
        if not all(math.isfinite(x) for x in a + r):
            raise ValueError("abscissas and charges must be finite")
        if not (a[0] < a[1] < a[2]):
            raise DuplicateAbscissa(f"abscissas must be strictly increasing, got {a}")
        if min(r) <= 0:
            raise NonpositiveCharge(f"charges must be positive, got {r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "rho", r)

    @property
    def a_coeffs(self) -> np.ndarray:
        """A(x) = (x-a1)(x-a2)(x-a3), ascending powers (a0, a1, a2, 1)."""
        a1, a2, a3 = self.alpha
        e1 = a1 + a2 + a3
        e2 = a1 * a2 + a1 * a3 + a2 * a3
        e3 = a1 * a2 * a3
        return _frozen([-e3, e2, -e1, 1.0])

    @property
    def b_coeffs(self) -> np.ndarray:
        """B(x) = sum_l rho_l A(x)/(x-alpha_l), ascending powers (b0, b1, b2)."""
        a, r = self.alpha, self.rho
        b0 = b1 = b2 = 0.0
        for l in range(3):
            m, n = [i for i in range(3) if i != l]
            b2 += r[l]
            b1 -= r[l] * (a[m] + a[n])
            b0 += r[l] * a[m] * a[n]
        return _frozen([b0, b1, b2])

    @property
    def span(self) -> float:
        return self.alpha[2] - self.alpha[0]

    def A(self, x):
        x = np.asarray(x, dtype=float)
        a1, a2, a3 = self.alpha
        return (x - a1) * (x - a2) * (x - a3)

    def B(self, x):
        x = np.asarray(x, dtype=float)
        b0, b1, b2 = self.b_coeffs
        return (b2 * x + b1) * x + b0

    def J(self, x):
        """Integrating factor prod |x - alpha_j|^rho_j."""
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for a, r in zip(self.alpha, self.rho):
            out = out * np.abs(x - a) ** r
        return out

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha), "rho": list(self.rho)}


def validate_system(alphas: Sequence[float], rhos: Sequence[float]) -> LameSystem:
    """Sort abscissas (carrying their charges along) and validate."""
    alphas = [float(a) for a in alphas]
    rhos = [float(r) for r in rhos]
    if len(alphas) != 3 or len(rhos) != 3:
        raise ValueError("need exactly three abscissas and three charges")
    if len(set(alphas)) < 3:
        raise DuplicateAbscissa(f"repeated abscissa in {alphas}")
    if min(rhos) <= 0:
        raise NonpositiveCharge(f"charges must be positive, got {rhos}")
    order = np.argsort(alphas)
    return LameSystem(tuple(alphas[i] for i in order), tuple(rhos[i] for i in order))


def load_system(path) -> LameSystem:
    """Read a flat TOML file with keys alpha=[...] and rho=[...]."""
    with open(Path(path), "rb") as fh:
        data = tomllib.load(fh)
    try:
        return validate_system(data["alpha"], data["rho"])
    except KeyError as exc:
        raise ValueError(f"{path}: missing key {exc}") from None


def mu(system: LameSystem, k: int) -> float:
    """Coupling constant k(k-1+rho1+rho2+rho3)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return k * (k - 1 + math.fsum(system.rho))


@dataclass(frozen=True)
class DensePolynomial:
    """Real polynomial stored by ascending-power coefficients."""

    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coefficients, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if c.size > 1 and c[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, x):
        return eval_poly(self, x)[0]

    def __repr__(self):
        return f"DensePolynomial(degree={self.degree}, coefficients={self.coefficients.tolist()})"

    @classmethod
    def from_roots(cls, roots) -> "DensePolynomial":
        return cls(np.polynomial.polynomial.polyfromroots(roots))


def eval_poly(p: DensePolynomial, x):
    """Horner evaluation of (p, p', p'') at x (scalar or array)."""
    c = p.coefficients if isinstance(p, DensePolynomial) else np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    v = np.zeros_like(x) + c[-1]
    d1 = np.zeros_like(x)
    d2 = np.zeros_like(x)
    for a in c[-2::-1]:
        d2 = d2 * x + 2.0 * d1
        d1 = d1 * x + v
        v = v * x + a
    if v.ndim == 0:
        return float(v), float(d1), float(d2)
    return v, d1, d2


@dataclass(frozen=True)
class AffineMap:
    """x -> u*x + v."""

    u: float
    v: float

    def __post_init__(self):
        if self.u == 0 or not math.isfinite(self.u) or not math.isfinite(self.v):
            raise ValueError("affine scale must be finite and nonzero")

    def forward(self, x):
        return self.u * np.asarray(x, dtype=float) + self.v if np.ndim(x) else self.u * x + self.v

    def inverse(self, y):
        return (np.asarray(y, dtype=float) - self.v) / self.u if np.ndim(y) else (y - self.v) / self.u

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v}


def canonical_rescale(system: LameSystem):
    """Map alpha1 -> -1 and alpha3 -> +1; returns (mapped system, forward map)."""
    a1, a2, a3 = system.alpha
    u = 2.0 / (a3 - a1)
    v = -(a1 + a3) / (a3 - a1)
    # the outer abscissas are set exactly so the canonical frame is always [-1, 1]
    mid = (2.0 * a2 - (a1 + a3)) / (a3 - a1)
    return LameSystem((-1.0, mid, 1.0), system.rho), AffineMap(u, v)


def map_system(system: LameSystem, m: AffineMap) -> LameSystem:
    """Image of a system under an affine map (orientation-preserving or not)."""
    return validate_system([m.forward(a) for a in system.alpha], system.rho)
