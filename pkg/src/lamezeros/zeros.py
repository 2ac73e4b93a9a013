"""Real zeros of Stieltjes polynomials with certified per-interval counts."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpfr

from . import multiprec as mp
from .core import AffineMap, DensePolynomial, LameSystem
from .errors import CountMismatch, DegreeZero, TheoremViolation
from .spectrum import VanVleckSpectrum, refine_spectrum

STRICT_ULPS = 1e3


def separated(a: float, b: float, scale: float = 0.0) -> bool:
    """True when b exceeds a by more than 1e3 ulps of the local scale."""
    s = max(abs(a), abs(b), scale)
    return (b - a) > STRICT_ULPS * np.spacing(s)


class SturmSequence:
    """Scaled remainder sequence p0 = S, p1 = S', p_{i+1} = -rem(p_{i-1}, p_i).

    Each remainder is divided by its largest coefficient magnitude, which keeps
    signs and avoids the growth of the raw sequence.
    """

    def __init__(self, coeffs, precision: int):
        self.precision = precision
        with mp.context(precision):
            p0 = [mpfr(c) for c in coeffs][::-1]  # descending
            while p0 and p0[0] == 0:
                p0.pop(0)
            if len(p0) < 2:
                raise DegreeZero("Sturm sequence needs degree >= 1")
            n = len(p0) - 1
            p1 = [p0[i] * (n - i) for i in range(n)]
            seq = [self._scaled(p0), self._scaled(p1)]
            while len(seq[-1]) > 1:
                r = self._rem(seq[-2], seq[-1])
                while r and r[0] == 0:
                    r.pop(0)
                if not r:
                    break  # repeated root: the last entry is the gcd
                seq.append(self._scaled([-t for t in r]))
            self.seq = seq
        self.squarefree = len(seq[-1]) == 1

    @staticmethod
    def _scaled(p):
        m = max(abs(t) for t in p)
        return [t / m for t in p]

    @staticmethod
    def _rem(a, b):
        r = list(a)
        nb = len(b)
        for i in range(len(a) - nb + 1):
            q = r[i] / b[0]
            if q != 0:
                for t in range(1, nb):
                    r[i + t] -= q * b[t]
            r[i] = mpfr(0)
        return r[len(a) - nb + 1:]

    def variations(self, x) -> int:
        with mp.context(self.precision):
            xm = mpfr(x)
            last = 0
            changes = 0
            for p in self.seq:
                v = p[0]
                for t in p[1:]:
                    v = v * xm + t
                s = mp.sign(v)
                if s:
                    if last and s != last:
                        changes += 1
                    last = s
            return changes

    def count(self, a, b) -> int:
        """Number of distinct real zeros in (a, b]."""
        return self.variations(a) - self.variations(b)


@dataclass(frozen=True)
class ZeroAnalysis:
    zeros: np.ndarray
    left: int
    right: int
    gap_changes: int
    sturm: SturmSequence = field(repr=False, compare=False)


def _as_mp(coeffs, precision):
    if isinstance(coeffs, DensePolynomial):
        coeffs = coeffs.coefficients
    with mp.context(precision):
        return [mpfr(c) if not isinstance(c, (float, int, np.floating)) else mpfr(float(c)) for c in coeffs]


def _cheb_grid(a: float, b: float, n: int) -> np.ndarray:
    t = np.cos(np.pi * np.arange(n, -1, -1) / n)
    g = a + (b - a) * (t + 1.0) / 2.0
    g[0], g[-1] = a, b
    return g


def _brackets(c, sturm: SturmSequence, alpha, k: int):
    """Intervals (lo, hi) each holding exactly one zero, with opposite end signs."""
    a1, a2, a3 = alpha
    n = 2 * k + 4
    grid = np.unique(np.concatenate([_cheb_grid(a1, a2, n), _cheb_grid(a2, a3, n)]))
    vals = [mp.horner(c, mpfr(float(x))) for x in grid]
    for i, v in enumerate(vals):
        if v == 0:
            raise CountMismatch(f"polynomial vanishes exactly at grid point {grid[i]!r}")
    sgn = [mp.sign(v) for v in vals]
    cells = [(grid[i], grid[i + 1]) for i in range(len(grid) - 1) if sgn[i] != sgn[i + 1]]
    if len(cells) == k:
        return cells
    # some cell hides an even number of zeros: fall back to Sturm bisection
    var = [sturm.variations(x) for x in grid]
    todo = [(grid[i], grid[i + 1], var[i], var[i + 1]) for i in range(len(grid) - 1) if var[i] > var[i + 1]]
    cells = []
    for _ in range(200):
        nxt = []
        for lo, hi, vlo, vhi in todo:
            if vlo - vhi == 1:
                cells.append((lo, hi))
                continue
            mid = 0.5 * (lo + hi)
            if not (lo < mid < hi):
                raise CountMismatch(f"zeros not separable in double precision near {lo!r}")
            vm = sturm.variations(mid)
            if vlo > vm:
                nxt.append((lo, mid, vlo, vm))
            if vm > vhi:
                nxt.append((mid, hi, vm, vhi))
        todo = nxt
        if not todo:
            break
    else:
        raise CountMismatch("bisection depth exhausted")
    cells.sort()
    return cells


def _polish(c, lo: float, hi: float, precision: int) -> float:
    """Safeguarded Newton inside a sign-change bracket, in multiprecision."""
    with mp.context(precision):
        lo_m, hi_m = mpfr(lo), mpfr(hi)
        flo = mp.horner(c, lo_m)
        fhi = mp.horner(c, hi_m)
        slo = mp.sign(flo)
        if slo == mp.sign(fhi):
            raise CountMismatch(f"bracket ({lo!r}, {hi!r}) lacks a sign change")
        x = (lo_m * abs(fhi) + hi_m * abs(flo)) / (abs(flo) + abs(fhi))
        tol = mpfr(2) ** -60 * max(abs(x), mpfr(2) ** -20)
        for _ in range(300):
            f, fp = mp.horner2(c, x)
            if f == 0:
                break
            if mp.sign(f) == slo:
                lo_m = x
            else:
                hi_m = x
            xn = x - f / fp if fp != 0 else lo_m - 1
            if not (lo_m < xn < hi_m):
                xn = (lo_m + hi_m) / 2
            done = abs(xn - x) <= tol or hi_m - lo_m <= tol
            x = xn
            if done:
                break
        return float(x)


def analyze_polynomial(coeffs, system: LameSystem, nu: float | None = None,
                       precision: int | None = None) -> ZeroAnalysis:
    """Zeros and Sturm counts of a polynomial whose coefficients live in `system`'s frame."""
    if isinstance(coeffs, DensePolynomial):
        k = coeffs.degree
    else:
        k = len(coeffs) - 1
    if k < 1:
        raise DegreeZero("need degree >= 1")
    prec = precision or mp.working_precision(k)
    c = _as_mp(coeffs, prec)
    a1, a2, a3 = system.alpha
    st = SturmSequence(c, prec)
    v1, v2, v3 = st.variations(a1), st.variations(a2), st.variations(a3)
    total = v1 - v3
    if total != k or not st.squarefree:
        raise CountMismatch(f"Sturm count over (alpha1, alpha3) is {total}, expected {k}")
    gap = 0
    if nu is not None and nu != a2:
        gap = abs(v2 - st.variations(nu))
    with mp.context(prec):
        cells = _brackets(c, st, system.alpha, k)
    if len(cells) != k:
        raise CountMismatch(f"isolated {len(cells)} zeros, expected {k}")
    zeros = np.array([_polish(c, lo, hi, prec) for lo, hi in cells])
    for i in range(k - 1):
        if not separated(zeros[i], zeros[i + 1], 0.0):
            raise CountMismatch(f"zeros {zeros[i]!r}, {zeros[i + 1]!r} closer than 1e3 ulps")
    for z in zeros:
        if not (a1 < z < a3) or not (separated(z, a2) or separated(a2, z)):
            raise CountMismatch(f"zero {z!r} outside (alpha1, alpha3) or at alpha2")
    return ZeroAnalysis(zeros, v1 - v2, v2 - v3, gap, st)


def isolate_zeros(coeffs, system: LameSystem, precision: int | None = None) -> np.ndarray:
    """Sorted real zeros in (alpha1, alpha3); coefficients in the frame of `system`."""
    return analyze_polynomial(coeffs, system, precision=precision).zeros


@dataclass(frozen=True)
class StieltjesSolution:
    """One labeled pair (nu_j, S_j) of degree k.

    nu and zeros are in the frame of `system`; coeffs are canonical-frame
    monic coefficients, related to `system` through `frame`.
    """

    k: int
    j: int
    nu: float
    coeffs: DensePolynomial
    zeros: tuple
    left_count: int
    right_count: int
    system: LameSystem = field(repr=False)
    frame: AffineMap = field(repr=False)
    gap_changes: int = 0

    def values(self, x):
        """Monic (in the system frame) product form: accurate where |S| is tiny."""
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for z in self.zeros:
            out = out * (x - z)
        return out


def _check_counts(k, j, left, right, gap, zeros, alpha2, nu):
    if left != j - 1 or right != k - j + 1:
        witness = zeros[j - 1] if left < j - 1 and j - 1 < len(zeros) else (left, right)
        raise TheoremViolation(k, j, witness, f"k={k} j={j}: counts ({left}, {right}) != ({j - 1}, {k - j + 1})")
    if gap:
        lo, hi = min(alpha2, nu), max(alpha2, nu)
        inside = [z for z in zeros if lo < z < hi]
        raise TheoremViolation(k, j, inside[0] if inside else gap, f"k={k} j={j}: zero between alpha2 and nu")


def _solve_once(spectrum: VanVleckSpectrum, j: int) -> StieltjesSolution:
    k = spectrum.k
    canon = spectrum.canonical
    nu_c = float(spectrum.nus_canonical[j - 1])
    an = analyze_polynomial(spectrum.exact[j - 1], canon, nu=nu_c, precision=spectrum.precision)
    _check_counts(k, j, an.left, an.right, an.gap_changes, an.zeros, canon.alpha[1], nu_c)
    zeros = np.sort(spectrum.frame.inverse(an.zeros))
    return StieltjesSolution(k, j, float(spectrum.nus[j - 1]), DensePolynomial(spectrum.coeffs[j - 1]),
                             tuple(float(z) for z in zeros), an.left, an.right,
                             spectrum.system, spectrum.frame, an.gap_changes)


def solve_label(spectrum: VanVleckSpectrum, j: int) -> StieltjesSolution:
    """Labeled solution j; one retry at doubled precision before any failure is reported."""
    k = spectrum.k
    if not 1 <= j <= k + 1:
        raise IndexError(f"label {j} outside 1..{k + 1}")
    try:
        return _solve_once(spectrum, j)
    except (CountMismatch, TheoremViolation):
        finer = refine_spectrum(spectrum.system, k, spectrum.nus_canonical, 2 * spectrum.precision)
        return _solve_once(finer, j)


def label_solutions(spectrum: VanVleckSpectrum, system: LameSystem | None = None) -> list:
    """All k+1 labeled solutions; the per-interval zero counts are asserted, not just reported."""
    if system is not None and system != spectrum.system:
        raise ValueError("spectrum was computed for a different system")
    return [solve_label(spectrum, j) for j in range(1, spectrum.k + 2)]


def zero_counts(spectrum: VanVleckSpectrum) -> list:
    """(left, right, gap sign changes) per label from Sturm sequences alone."""
    canon = spectrum.canonical
    a1, a2, a3 = canon.alpha
    out = []
    for j in range(1, spectrum.k + 2):
        st = SturmSequence(spectrum.exact[j - 1], spectrum.precision)
        v1, v2, v3 = st.variations(a1), st.variations(a2), st.variations(a3)
        nu = float(spectrum.nus_canonical[j - 1])
        gap = abs(v2 - st.variations(nu)) if nu != a2 else 0
        out.append((v1 - v2, v2 - v3, gap))
    return out


def fmt(x) -> str:
    return format(float(x), ".17g")


def solutions_csv(solutions) -> str:
    """CSV rows k, j, nu, zeros... in the original frame."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    kmax = max(s.k for s in solutions)
    w.writerow(["k", "j", "nu"] + [f"x{i}" for i in range(1, kmax + 1)])
    for s in solutions:
        w.writerow([s.k, s.j, fmt(s.nu)] + [fmt(z) for z in s.zeros])
    return buf.getvalue()
