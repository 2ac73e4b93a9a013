"""Executable strict-inequality predicates for the counting and interlacing statements.

Two values count as equal (predicate failure) when they differ by fewer than
1e3 ulps of the local scale max(|a|, |b|).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .core import LameSystem, mu
from .errors import DegreeMismatch, IndexOutOfRange, LabelMismatch
from .spectrum import VanVleckSpectrum
from .zeros import STRICT_ULPS, StieltjesSolution

WRONSKIAN_TOL = 1e-5


@dataclass(frozen=True)
class InterlacingReport:
    claim: str
    params: dict
    verdict: bool
    min_margin: float | None  # smallest strict-inequality margin in ulps of the local scale
    witnesses: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict

    def to_json(self) -> str:
        return json.dumps({
            "claim": self.claim,
            "params": self.params,
            "verdict": "holds" if self.verdict else "fails",
            "min_margin": None if self.min_margin is None or not np.isfinite(self.min_margin) else self.min_margin,
            "witnesses": self.witnesses,
        }, default=float)


@dataclass(frozen=True)
class NuHat:
    value: float
    k: int
    j: int
    i: int


def _margins(chain) -> np.ndarray:
    c = np.asarray(chain, dtype=float)
    if c.size < 2:
        return np.array([np.inf])
    scale = np.maximum(np.abs(c[:-1]), np.abs(c[1:]))
    return np.diff(c) / np.spacing(np.maximum(scale, np.finfo(float).tiny))


def _strict_chain(chain) -> tuple:
    m = _margins(chain)
    return bool(np.all(m > STRICT_ULPS)), float(np.min(m))


def _merge(first, second):
    """Merged sorted values with source tags (0 for first, 1 for second)."""
    vals = np.concatenate([first, second])
    tags = np.concatenate([np.zeros(len(first), int), np.ones(len(second), int)])
    order = np.argsort(vals, kind="mergesort")
    return vals[order], tags[order]


def check_zero_counts(sol: StieltjesSolution) -> InterlacingReport:
    a1, a2, a3 = sol.system.alpha
    z = np.asarray(sol.zeros)
    left = int(np.sum(z < a2))
    right = int(np.sum(z > a2))
    lo, hi = min(a2, sol.nu), max(a2, sol.nu)
    in_gap = [float(x) for x in z if lo < x < hi]
    ok = (sol.left_count == sol.j - 1 and sol.right_count == sol.k - sol.j + 1
          and left == sol.left_count and right == sol.right_count
          and sol.gap_changes == 0 and not in_gap)
    near = np.concatenate([z, [sol.nu]])
    dist = np.min(np.abs(near - a2)) / np.spacing(max(abs(a2), np.max(np.abs(near))))
    strict = dist > STRICT_ULPS
    return InterlacingReport("theorem1", {"k": sol.k, "j": sol.j}, bool(ok and strict), float(dist), {
        "left_count": sol.left_count, "right_count": sol.right_count, "expected": [sol.j - 1, sol.k - sol.j + 1],
        "alpha2": a2, "nu": sol.nu, "zeros_in_gap": in_gap})


def _alternation(vals, tags, first_tag, n_total):
    """True when tags alternate starting with first_tag over all n_total entries."""
    expect = (np.arange(n_total) + first_tag) % 2
    return bool(np.array_equal(tags, expect))


def check_same_degree(solA: StieltjesSolution, solB: StieltjesSolution) -> InterlacingReport:
    """Zeros of S_j and S_{j+1} alternate, the smallest belonging to S_{j+1}."""
    if solA.k != solB.k or solB.j != solA.j + 1:
        raise LabelMismatch(f"need (k, j) and (k, j+1), got ({solA.k}, {solA.j}) and ({solB.k}, {solB.j})")
    a1, _, a3 = solA.system.alpha
    vals, tags = _merge(solB.zeros, solA.zeros)  # tag 0: S_{j+1}
    alternates = _alternation(vals, tags, 0, vals.size)
    strict, margin = _strict_chain(np.concatenate([[a1], vals, [a3]]))
    return InterlacingReport("theorem2", {"k": solA.k, "j": solA.j}, alternates and strict, margin, {
        "merged": vals.tolist(), "source": ["j+1" if t == 0 else "j" for t in tags]})


def check_cross_degree(solK: StieltjesSolution, solK1: StieltjesSolution) -> InterlacingReport:
    """Zeros of S_j^(k) and S_i^(k+1) interlace iff i in {j, j+1}; both directions checked."""
    if solK1.k != solK.k + 1:
        raise DegreeMismatch(f"need degrees k and k+1, got {solK.k} and {solK1.k}")
    a1, _, a3 = solK.system.alpha
    i, j = solK1.j, solK.j
    vals, tags = _merge(solK1.zeros, solK.zeros)  # tag 0: degree k+1
    interlaces = _alternation(vals, tags, 0, vals.size)
    strict, margin = _strict_chain(np.concatenate([[a1], vals, [a3]]))
    expected = i in (j, j + 1)
    witness = {"merged": vals.tolist(), "source": ["k+1" if t == 0 else "k" for t in tags],
               "interlaces": interlaces, "expected": expected}
    if not interlaces:
        same = np.nonzero(tags[1:] == tags[:-1])[0]
        if same.size:
            p = int(same[0])
            witness["same_source_pair"] = [float(vals[p]), float(vals[p + 1])]
        else:
            witness["same_source_pair"] = None
    return InterlacingReport("theorem3", {"k": solK.k, "j": j, "i": i}, (interlaces == expected) and strict,
                             margin, witness)


def check_corollary(solJ: StieltjesSolution, solL: StieltjesSolution) -> InterlacingReport:
    """For l > j: a zero of S_l between consecutive left zeros of S_j, and a zero of S_j
    between consecutive right zeros of S_l."""
    if solJ.k != solL.k or solL.j <= solJ.j:
        raise LabelMismatch("need the same degree and l > j")
    a2 = solJ.system.alpha[1]
    zj, zl = np.asarray(solJ.zeros), np.asarray(solL.zeros)
    ok = True
    margin = np.inf
    failures = []
    for outer, inner, side in ((zj[zj < a2], zl, "left"), (zl[zl > a2], zj, "right")):
        for lo, hi in zip(outer[:-1], outer[1:]):
            between = inner[(inner > lo) & (inner < hi)]
            if between.size == 0:
                ok = False
                failures.append([side, float(lo), float(hi)])
                continue
            _, m = _strict_chain([lo, between[0], hi])
            margin = min(margin, m)
    strict = margin > STRICT_ULPS
    return InterlacingReport("corollary", {"k": solJ.k, "j": solJ.j, "l": solL.j}, ok and strict, float(margin),
                             {"failures": failures})


def check_van_vleck_chain(specK: VanVleckSpectrum, specK1: VanVleckSpectrum) -> InterlacingReport:
    if specK1.k != specK.k + 1:
        raise DegreeMismatch(f"need degrees k and k+1, got {specK.k} and {specK1.k}")
    a1, _, a3 = specK.system.alpha
    chain = [a1]
    for t in range(specK.k + 1):
        chain += [specK1.nus[t], specK.nus[t]]
    chain += [specK1.nus[-1], a3]
    strict, margin = _strict_chain(chain)
    return InterlacingReport("van_vleck_chain", {"k": specK.k}, strict, margin, {"chain": [float(c) for c in chain]})


def nu_hat(specK: VanVleckSpectrum, specK1: VanVleckSpectrum, j: int, i: int) -> NuHat:
    mk, mk1 = specK.mu_k, specK1.mu_k
    value = (mk1 * specK1.nus[i - 1] - mk * specK.nus[j - 1]) / (mk1 - mk)
    return NuHat(float(value), specK.k, j, i)


def check_nu_hat_bounds(specK: VanVleckSpectrum, specK1: VanVleckSpectrum, j: int) -> InterlacingReport:
    if specK1.k != specK.k + 1:
        raise DegreeMismatch(f"need degrees k and k+1, got {specK.k} and {specK1.k}")
    if not 1 <= j <= specK.k + 1:
        raise IndexOutOfRange(f"label {j} outside 1..{specK.k + 1}")
    a1, a2, a3 = specK.system.alpha
    h1 = nu_hat(specK, specK1, j, j).value
    h2 = nu_hat(specK, specK1, j, j + 1).value
    s1, m1 = _strict_chain([a1, h1, a2])
    s2, m2 = _strict_chain([a2, h2, a3])
    return InterlacingReport("nu_hat_bounds", {"k": specK.k, "j": j}, s1 and s2, min(m1, m2),
                             {"nu_hat_j": h1, "nu_hat_j1": h2, "alpha": list(specK.system.alpha)})


def _grid(system: LameSystem, npts: int, exclude: float) -> np.ndarray:
    a1, a2, a3 = system.alpha
    t = (np.arange(npts) + 0.5) / npts
    x = a1 + (a3 - a1) * t
    keep = np.ones_like(x, bool)
    for a in system.alpha:
        keep &= np.abs(x - a) > exclude
    return x[keep]


def _wronskian_residuals(solA, solB, system, npts, exclude):
    """FD derivative of J (S_B' S_A - S_B S_A') against (J/A)(V_B - V_A) S_A S_B,
    with V = mu (x - nu); returns per-point relative error and Q samples."""
    za, zb = np.asarray(solA.zeros), np.asarray(solB.zeros)
    mua, mub = mu(system, solA.k), mu(system, solB.k)
    scale_len = system.span / (max(solA.k, solB.k) + 1)

    def jw(x):
        sa = np.prod(x[:, None] - za[None, :], axis=1)
        sb = np.prod(x[:, None] - zb[None, :], axis=1)
        la = np.sum(1.0 / (x[:, None] - za[None, :]), axis=1)
        lb = np.sum(1.0 / (x[:, None] - zb[None, :]), axis=1)
        return system.J(x) * sa * sb * (lb - la)

    x = _grid(system, npts, exclude)
    d = np.min(np.abs(x[:, None] - np.array(system.alpha)[None, :]), axis=1)
    h = 1e-3 * np.minimum(d, scale_len)
    lhs = (-jw(x + 2 * h) + 8 * jw(x + h) - 8 * jw(x - h) + jw(x - 2 * h)) / (12 * h)
    q = system.J(x) / system.A(x) * (mub * (x - solB.nu) - mua * (x - solA.nu))
    sa = np.prod(x[:, None] - za[None, :], axis=1)
    sb = np.prod(x[:, None] - zb[None, :], axis=1)
    rhs = q * sa * sb
    # local amplitude of S that does not vanish at its zeros
    ea = np.hypot(sa, sa * np.sum(1.0 / (x[:, None] - za[None, :]), axis=1) * scale_len)
    eb = np.hypot(sb, sb * np.sum(1.0 / (x[:, None] - zb[None, :]), axis=1) * scale_len)
    rel = np.abs(lhs - rhs) / (np.abs(q) * ea * eb)
    return x, rel, q


def check_wronskian_identity(solA: StieltjesSolution, solB: StieltjesSolution,
                             system: LameSystem | None = None, npts: int = 200,
                             tol: float = WRONSKIAN_TOL) -> InterlacingReport:
    """d/dx[J (S_{j+1}' S_j - S_{j+1} S_j')] = Q S_j S_{j+1} with Q = mu_k (nu_j - nu_{j+1}) J/A.

    The mu_k factor follows from the equation itself; Q is negative on
    (alpha1, alpha2) and positive on (alpha2, alpha3).
    """
    if solA.k != solB.k or solB.j != solA.j + 1:
        raise LabelMismatch("need adjacent labels of one degree")
    system = system or solA.system
    x, rel, q = _wronskian_residuals(solA, solB, system, npts, 1e-4)
    a2 = system.alpha[1]
    signs_ok = bool(np.all(q[x < a2] < 0) and np.all(q[x > a2] > 0))
    worst = float(np.max(rel))
    return InterlacingReport("wronskian", {"k": solA.k, "j": solA.j}, worst <= tol and signs_ok, None,
                             {"max_relative_error": worst, "q_signs_ok": signs_ok, "points": int(x.size)})


def check_cross_wronskian(solK: StieltjesSolution, solK1: StieltjesSolution,
                          system: LameSystem | None = None, npts: int = 200,
                          tol: float = WRONSKIAN_TOL) -> InterlacingReport:
    """Cross-degree identity with Q = (mu_{k+1} - mu_k)(J/A)(x - nu_hat)."""
    if solK1.k != solK.k + 1:
        raise DegreeMismatch("need degrees k and k+1")
    system = system or solK.system
    x, rel, q = _wronskian_residuals(solK, solK1, system, npts, 1e-4)
    worst = float(np.max(rel))
    return InterlacingReport("wronskian_cross", {"k": solK.k, "j": solK.j, "i": solK1.j}, worst <= tol, None,
                             {"max_relative_error": worst, "points": int(x.size)})


def sweep(system: LameSystem, spectra: dict, solutions: dict, claims=None, corollary_kmax: int = 16,
          wronskian_tol: float = WRONSKIAN_TOL):
    """Yield reports for every predicate over consecutive degrees present in `spectra`."""
    want = set(claims) if claims else None

    def on(name):
        return want is None or name in want

    ks = sorted(spectra)
    for k in ks:
        sols = solutions[k]
        for s in sols:
            if on("theorem1"):
                yield check_zero_counts(s)
        for a, b in zip(sols, sols[1:]):
            if on("theorem2"):
                yield check_same_degree(a, b)
            if on("wronskian"):
                yield check_wronskian_identity(a, b, system, tol=wronskian_tol)
        if on("corollary") and k <= corollary_kmax:
            for a in sols:
                for b in sols[a.j:]:
                    yield check_corollary(a, b)
        if k + 1 in spectra:
            if on("van_vleck_chain"):
                yield check_van_vleck_chain(spectra[k], spectra[k + 1])
            if on("nu_hat_bounds"):
                for j in range(1, k + 2):
                    yield check_nu_hat_bounds(spectra[k], spectra[k + 1], j)
            if on("theorem3"):
                for a in sols:
                    for b in solutions[k + 1]:
                        yield check_cross_degree(a, b)
