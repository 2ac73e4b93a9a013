import math

import mpmath
import numpy as np
import pytest

from lamezeros.core import DensePolynomial
from lamezeros.errors import CountMismatch
from lamezeros.spectrum import van_vleck_spectrum
from lamezeros.zeros import SturmSequence, isolate_zeros, label_solutions, solutions_csv, zero_counts
from systems import FIGURE1, SYMMETRIC, random_systems

NU_MINUS = (11 - math.sqrt(601)) / 20
NU_PLUS = (11 + math.sqrt(601)) / 20


def test_k1_zeros():
    s1, s2 = label_solutions(van_vleck_spectrum(FIGURE1, 1))
    assert s2.zeros[0] == pytest.approx(NU_MINUS, abs=1e-13)
    assert s1.zeros[0] == pytest.approx(NU_PLUS, abs=1e-13)
    assert FIGURE1.alpha[1] < s1.zeros[0] < FIGURE1.alpha[2]
    assert FIGURE1.alpha[0] < s1.nu < FIGURE1.alpha[1]


def test_figure1_k6_counts():
    sols = label_solutions(van_vleck_spectrum(FIGURE1, 6))
    assert [s.left_count for s in sols] == list(range(7))
    assert (sols[3].left_count, sols[3].right_count) == (3, 3)


def test_symmetric_middle_label_pairs():
    sol = label_solutions(van_vleck_spectrum(SYMMETRIC, 8))[4]
    z = np.array(sol.zeros)
    assert np.max(np.abs(z + z[::-1])) <= 1e-12


def test_sturm_counts_simple():
    st = SturmSequence([-2.0, 0.0, 1.0], 64)  # x^2 - 2
    assert st.count(-2, 2) == 2 and st.count(0, 2) == 1


def test_isolate_rejects_complex_roots():
    with pytest.raises(CountMismatch):
        isolate_zeros(DensePolynomial([1.0, 0.0, 1.0]), FIGURE1)


def test_high_degree_stress_against_companion_oracle():
    s = random_systems(1, 6)[0]
    spec = van_vleck_spectrum(s, 64)
    j = 23
    c = spec.exact[j - 1]
    zeros = isolate_zeros(c, spec.canonical, precision=spec.precision)
    assert len(zeros) == 64
    with mpmath.workprec(spec.precision * 2):
        cm = [mpmath.mpf(str(v)) for v in c]
        oracle = sorted(float(mpmath.re(r)) for r in mpmath.polyroots(cm[::-1], maxsteps=400, extraprec=600))
        scale = max(abs(v) for v in cm)
        res = max(abs(mpmath.polyval(cm[::-1], mpmath.mpf(z))) for z in zeros)
    assert np.max(np.abs(np.array(oracle) - zeros)) <= 1e-12
    assert float(res / scale) <= 1e-10


def test_zero_counts_match_solutions():
    spec = van_vleck_spectrum(FIGURE1, 12)
    counts = zero_counts(spec)
    sols = label_solutions(spec)
    assert [(c[0], c[1]) for c in counts] == [(s.left_count, s.right_count) for s in sols]
    assert all(c[2] == 0 for c in counts)


def test_gap_property():
    for s in random_systems(2, 7):
        for sol in label_solutions(van_vleck_spectrum(s, 15)):
            lo, hi = sorted((s.alpha[1], sol.nu))
            assert not any(lo < z < hi for z in sol.zeros)


def test_solutions_csv_shape():
    text = solutions_csv(label_solutions(van_vleck_spectrum(FIGURE1, 6)))
    lines = text.strip().split("\n")
    assert len(lines) == 8 and lines[0].startswith("k,j,nu,x1")
