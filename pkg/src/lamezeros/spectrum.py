"""Van Vleck spectra: the banded monomial operator and its eigenpairs."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import flint
import gmpy2
from gmpy2 import mpfr

from . import multiprec as mp
from .core import AffineMap, LameSystem, canonical_rescale, mu
from .errors import DegreeTooLarge, DegreeZero, SpectrumNotReal

MAX_DEGREE = 256
REALNESS_TOL = 1e-8


@dataclass(frozen=True)
class BandedOperator:
    """Matrix of S -> A S'' + B S' - mu_k x S on monomial coefficients.

    Row r holds sub[r] at column r-1, diag[r] at r, sup1[r] at r+1, sup2[r] at r+2.
    """

    k: int
    mu_k: float
    sub: np.ndarray
    diag: np.ndarray
    sup1: np.ndarray
    sup2: np.ndarray

    @property
    def order(self) -> int:
        return self.k + 1

    def dense(self) -> np.ndarray:
        n = self.order
        m = np.diag(self.diag)
        m[np.arange(1, n), np.arange(n - 1)] = self.sub[1:]
        m[np.arange(n - 1), np.arange(1, n)] = self.sup1[:-1]
        m[np.arange(n - 2), np.arange(2, n)] = self.sup2[:-2]
        return m

    def apply(self, c) -> np.ndarray:
        return self.dense() @ np.asarray(c, dtype=float)


def _band_entries(a_coeffs, b_coeffs, k, mu_k):
    a0, a1, a2 = a_coeffs[:3]
    b0, b1, b2 = b_coeffs
    r = np.arange(k + 1, dtype=float)
    sub = (r - 1) * (r - 2 + b2) - mu_k
    diag = r * (r - 1) * a2 + r * b1
    sup1 = (r + 1) * r * a1 + (r + 1) * b0
    sup2 = (r + 2) * (r + 1) * a0
    sub[0] = 0.0
    sup1[k] = 0.0
    sup2[k - 1:] = 0.0
    return sub, diag, sup1, sup2


def build_operator(system: LameSystem, k: int) -> BandedOperator:
    if k < 1:
        raise DegreeZero("spectra need k >= 1")
    mu_k = mu(system, k)
    sub, diag, sup1, sup2 = _band_entries(system.a_coeffs, system.b_coeffs, k, mu_k)
    return BandedOperator(k, mu_k, sub, diag, sup1, sup2)


@dataclass(frozen=True)
class VanVleckSpectrum:
    """All k+1 Van Vleck zeros of degree k with their monic eigenvectors.

    nus are in the frame of `system`; coeffs and nus_canonical live in the
    canonical frame reached through `frame` (original -> canonical).
    """

    k: int
    mu_k: float
    nus: np.ndarray
    coeffs: np.ndarray
    system: LameSystem
    canonical: LameSystem
    frame: AffineMap
    nus_canonical: np.ndarray
    precision: int
    exact: tuple = field(repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "mu": self.mu_k,
            "nus": [float(x) for x in self.nus_canonical],
            "coefficients": [[float(x) for x in row] for row in self.coeffs],
            "map": self.frame.to_dict(),
            "system": self.system.to_dict(),
            "nus_original": [float(x) for x in self.nus],
        }


def cheb(n: int):
    """Chebyshev-Lobatto points (descending) and differentiation matrix, n+1 points."""
    if n == 0:
        return np.zeros((1, 1)), np.ones(1)
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d -= np.diag(d.sum(axis=1))
    return d, x


def _collocation_eigenvalues(canon: LameSystem, k: int, mu_k: float) -> np.ndarray:
    # T[S] has degree k, so collocating on k+1 points is an exact change of basis
    d, x = cheb(k)
    lop = canon.A(x)[:, None] * (d @ d) + canon.B(x)[:, None] * d - mu_k * np.diag(x)
    return np.linalg.eigvals(lop)


def _extended_eigenvalues(canon: LameSystem, k: int, mu_k: float, precision: int) -> np.ndarray:
    import mpmath

    op = build_operator(canon, k)
    with mpmath.workprec(precision):
        evals = mpmath.eig(mpmath.matrix(op.dense().tolist()), left=False, right=False)
        return np.array([complex(e) for e in evals])


def _recurrence(lam, bands, k, want_derivative=True):
    """Downward recurrence from c_k = 1 through rows k..1; returns (c, f, f')."""
    sub, diag, sup1, sup2 = bands
    c = [mpfr(0)] * (k + 3)
    dc = [mpfr(0)] * (k + 3)
    c[k] = mpfr(1)
    for r in range(k, 0, -1):
        t = (diag[r] - lam) * c[r] + sup1[r] * c[r + 1] + sup2[r] * c[r + 2]
        c[r - 1] = -t / sub[r]
        if want_derivative:
            dt = (diag[r] - lam) * dc[r] - c[r] + sup1[r] * dc[r + 1] + sup2[r] * dc[r + 2]
            dc[r - 1] = -dt / sub[r]
    f = (diag[0] - lam) * c[0] + sup1[0] * c[1] + sup2[0] * c[2]
    df = (diag[0] - lam) * dc[0] - c[0] + sup1[0] * dc[1] + sup2[0] * dc[2]
    return c[: k + 1], f, df


def _mp_bands(canon: LameSystem, k: int):
    """Band entries rebuilt exactly in multiprecision from the canonical data."""
    a = [mpfr(x) for x in canon.alpha]
    r_ = [mpfr(x) for x in canon.rho]
    a0 = -a[0] * a[1] * a[2]
    a1 = a[0] * a[1] + a[0] * a[2] + a[1] * a[2]
    a2 = -(a[0] + a[1] + a[2])
    b2 = r_[0] + r_[1] + r_[2]
    b1 = -(r_[0] * (a[1] + a[2]) + r_[1] * (a[0] + a[2]) + r_[2] * (a[0] + a[1]))
    b0 = r_[0] * a[1] * a[2] + r_[1] * a[0] * a[2] + r_[2] * a[0] * a[1]
    mu_k = k * (k - 1 + b2)
    sub, diag, sup1, sup2 = [], [], [], []
    for r in range(k + 3):
        sub.append((r - 1) * (r - 2 + b2) - mu_k)
        diag.append(r * (r - 1) * a2 + r * b1)
        sup1.append((r + 1) * r * a1 + (r + 1) * b0 if r < k else mpfr(0))
        sup2.append((r + 2) * (r + 1) * a0 if r < k - 1 else mpfr(0))
    return (sub, diag, sup1, sup2), mu_k


def _refine(lam0: float, bands, k: int, scale, precision: int):
    """Newton on the recurrence determinant; returns (lambda, monic coefficients).

    Stops on a step below the working precision, or when steps stop shrinking
    once they are already far below double resolution (rounding floor).
    """
    lam = mpfr(lam0)
    tol = scale * mpfr(2) ** (-precision + 12)
    floor = scale * mpfr(2) ** (-(precision // 2))
    prev = None
    for _ in range(80):
        _, f, df = _recurrence(lam, bands, k)
        if f == 0 or df == 0:
            break
        step = f / df
        if prev is not None and abs(step) >= abs(prev) and abs(prev) <= floor:
            break
        lam -= step
        if abs(step) <= tol:
            break
        prev = step
    else:
        raise SpectrumNotReal(f"eigenvalue refinement did not settle near {lam0!r} (k={k})")
    c, _, _ = _recurrence(lam, bands, k, want_derivative=False)
    return lam, c


def refine_spectrum(system: LameSystem, k: int, guesses_canonical, precision: int | None = None):
    """Polish approximate canonical-frame Van Vleck zeros into a full spectrum."""
    canon, frame = canonical_rescale(system)
    prec = precision or mp.working_precision(k)
    guesses = np.sort(np.asarray(guesses_canonical, dtype=float))
    if guesses.size != k + 1 or not np.all(np.isfinite(guesses)):
        raise SpectrumNotReal(f"need {k + 1} finite eigenvalue guesses, got {guesses.size}")
    with mp.context(prec):
        bands, mu_mp = _mp_bands(canon, k)
        scale = mu_mp
        nus_mp, exact = [], []
        for g in guesses:
            lam, c = _refine(-float(mu_mp) * g, bands, k, scale, prec)
            nus_mp.append(-lam / mu_mp)
            exact.append(tuple(c))
        nus_c = np.array([float(v) for v in nus_mp])
        coeffs = np.array([[float(x) for x in c] for c in exact])
    drift = np.max(np.abs(nus_c - guesses))
    if drift > 1e-6 or np.any(np.diff(nus_c) <= 0):
        raise SpectrumNotReal(f"refined spectrum inconsistent with its guesses (k={k}, drift={drift:.2e})")
    if np.any(nus_c <= -1.0) or np.any(nus_c >= 1.0):
        raise SpectrumNotReal(f"Van Vleck zero outside (alpha1, alpha3) at k={k}")
    coeffs[:, k] = 1.0
    nus = frame.inverse(nus_c)
    return VanVleckSpectrum(k, mu(system, k), nus, coeffs, system, canon, frame, nus_c, prec, tuple(exact))


def van_vleck_spectrum(system: LameSystem, k: int, precision: int | None = None) -> VanVleckSpectrum:
    """All k+1 Van Vleck zeros (sorted) with monic coefficient vectors."""
    if k < 1:
        raise DegreeZero("spectra need k >= 1")
    if k > MAX_DEGREE:
        raise DegreeTooLarge(f"k={k} exceeds the supported maximum {MAX_DEGREE}")
    canon, _ = canonical_rescale(system)
    mu_k = mu(canon, k)
    lam = _collocation_eigenvalues(canon, k, mu_k)
    if np.max(np.abs(lam.imag)) > REALNESS_TOL * np.max(np.abs(lam)):
        lam = _extended_eigenvalues(canon, k, mu_k, precision or mp.working_precision(k))
        if np.max(np.abs(lam.imag)) > REALNESS_TOL * np.max(np.abs(lam)):
            raise SpectrumNotReal(f"complex eigenvalues persist at k={k}")
    return refine_spectrum(system, k, -lam.real / mu_k, precision)


def van_vleck_from_zeros(zeros, system: LameSystem) -> float:
    """Van Vleck zero implied by the top row of the operator for a monic S."""
    z = np.asarray(zeros, dtype=float)
    k = z.size
    if k < 1:
        raise DegreeZero("need at least one zero")
    a2 = system.a_coeffs[2]
    b1, b2 = system.b_coeffs[1], system.b_coeffs[2]
    mu_k = mu(system, k)
    c_km1 = -math.fsum(z)
    return -(((k - 1) * (k - 2 + b2) - mu_k) * c_km1 + k * (k - 1) * a2 + k * b1) / mu_k


def spectrum_to_json(spec: VanVleckSpectrum) -> str:
    return json.dumps(spec.to_dict(), indent=1, default=_float17)


def _float17(x):
    return float(x)


def spectrum_from_dict(data: dict, system: LameSystem | None = None) -> VanVleckSpectrum:
    """Rebuild a spectrum from its JSON form; the stored zeros seed a fresh refinement."""
    from .core import validate_system

    sysd = data.get("system")
    if system is None:
        if sysd is None:
            raise ValueError("spectrum file carries no system")
        system = validate_system(sysd["alpha"], sysd["rho"])
    k = int(data["k"])
    if k < 1:
        raise DegreeZero("spectra need k >= 1")
    return refine_spectrum(system, k, [float(x) for x in data["nus"]])


def _fixed(v, bits: int) -> int:
    """round(v * 2^bits) as a Python integer."""
    return int(gmpy2.rint(gmpy2.mul_2exp(v, bits)))


def ode_residuals(spec: VanVleckSpectrum, labels=None, npts: int = 64) -> np.ndarray:
    """max |A S'' + B S' - mu (x - nu) S| / (1 + max|S|) at npts Chebyshev points of [-1, 1].

    The residual polynomial M c + mu nu c is formed from the high-precision
    coefficient vectors with the returned (double) nu. Everything runs in
    fixed point (integers scaled by 2^precision) as FLINT integer matrix
    products, all labels at once. Rounding the monomial vector to doubles
    would swamp the check beyond k ~ 40 (see the ledger).
    """
    k = spec.k
    labels = list(labels) if labels is not None else list(range(1, k + 2))
    bits = spec.precision
    n = k + 1
    with mp.context(bits):
        (sub, diag, sup1, sup2), mu_mp = _mp_bands(spec.canonical, k)
        band = [0] * (n * n)
        for r in range(n):
            band[r * n + r] = _fixed(diag[r], bits)
            if r > 0:
                band[r * n + r - 1] = _fixed(sub[r], bits)
            if r + 1 < n:
                band[r * n + r + 1] = _fixed(sup1[r], bits)
            if r + 2 < n:
                band[r * n + r + 2] = _fixed(sup2[r], bits)
        # the x^(k+1) coefficient cancels identically: sub[k+1] = k(k-1+b2) - mu_k = 0
        shift = [0] * (len(labels) ** 2)
        for i, j in enumerate(labels):
            shift[i * len(labels) + i] = _fixed(mu_mp * mpfr(float(spec.nus_canonical[j - 1])), bits)
        coefs = flint.fmpz_mat([[_fixed(v, bits) for v in spec.exact[j - 1]] for j in labels]).transpose()
    res = flint.fmpz_mat(n, n, band) * coefs + coefs * flint.fmpz_mat(len(labels), len(labels), shift)
    powers = []
    for t in np.cos(np.pi * (np.arange(npts) + 0.5) / npts):
        num, den = float(t).as_integer_ratio()
        e = den.bit_length() - 1
        pw = 1
        for r in range(n):
            powers.append((pw << bits) >> (e * r))
            pw *= num
    powers = flint.fmpz_mat(npts, n, powers)
    svals = (powers * coefs).transpose().tolist()
    rvals = (powers * res).transpose().tolist()
    out = []
    for sv, rv in zip(svals, rvals):
        smax = int(max(abs(v) for v in sv)) / (1 << 2 * bits)
        rmax = int(max(abs(v) for v in rv)) / (1 << 3 * bits)
        out.append(rmax / (1 + smax))
    return np.array(out)


def ode_residual(spec: VanVleckSpectrum, j: int, npts: int = 64) -> float:
    """Scaled ODE residual of label j (see ode_residuals)."""
    return float(ode_residuals(spec, [j], npts)[0])
