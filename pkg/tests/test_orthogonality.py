import pytest

from lamezeros.asymptotics import jk_sequence, theta_c
from lamezeros.core import DensePolynomial
from lamezeros.errors import ShortSequence
from lamezeros.orthogonality import (chebyshev_control, normalized_product_integral, orthogonality_report,
                                     product_orthogonality_integral, recurrence_fit, theta_sequence)
from lamezeros.spectrum import van_vleck_spectrum
from lamezeros.zeros import label_solutions, solve_label
from systems import FIGURE1, SYMMETRIC


def test_cross_integral_any_labels():
    for a in label_solutions(van_vleck_spectrum(FIGURE1, 2)):
        for b in label_solutions(van_vleck_spectrum(FIGURE1, 5)):
            assert abs(normalized_product_integral(FIGURE1, a, b)) <= 1e-8


def test_diagonal_positive():
    for sol in label_solutions(van_vleck_spectrum(FIGURE1, 4)):
        assert product_orthogonality_integral(FIGURE1, sol, sol) > 0


def test_small_exponent_self_convergence():
    a = solve_label(van_vleck_spectrum(FIGURE1, 3), 2)
    b = solve_label(van_vleck_spectrum(FIGURE1, 6), 4)
    i64 = product_orthogonality_integral(FIGURE1, b, b, 64)
    i128 = product_orthogonality_integral(FIGURE1, b, b, 128)
    assert abs(i128 - i64) <= 1e-12 * i128
    c64 = product_orthogonality_integral(FIGURE1, a, b, 64)
    c128 = product_orthogonality_integral(FIGURE1, a, b, 128)
    assert abs(c128 - c64) <= 1e-12 * i128


def test_chebyshev_control():
    seq = chebyshev_control(12)
    for n in range(2, 13):
        fit = recurrence_fit(seq, n)
        assert fit.residual_norm <= 1e-12 and fit.b_n > 0
        assert fit.b_n == pytest.approx(0.5 if n == 2 else 0.25, abs=1e-15)
        assert fit.a_n == pytest.approx(0.0, abs=1e-15)


def test_degree_two_fit_is_exact():
    seq = theta_sequence(FIGURE1, theta_c(FIGURE1), 2)
    assert recurrence_fit(seq, 2).residual_norm <= 1e-15


def test_theta_c_sequence_is_not_a_recurrence():
    seq = theta_sequence(FIGURE1, theta_c(FIGURE1), 10)
    assert max(recurrence_fit(seq, n).residual_norm for n in range(2, 11)) > 1e-3


def test_short_sequence():
    with pytest.raises(ShortSequence):
        orthogonality_report(FIGURE1, 0.5, 3)
    with pytest.raises(ShortSequence):
        recurrence_fit([DensePolynomial([1.0])], 2)


def test_report_figure1():
    for th in (0.0, theta_c(FIGURE1), 1.0):
        r = orthogonality_report(FIGURE1, th, 10)
        assert r.max_normalized_product <= 1e-8
        assert r.max_residual > 1e-7
        assert len(r.fits) == 9 and "residual" in r.table()


def test_symmetric_mirror_sequences():
    # x -> -x maps label j to k+2-j, so a_n flips sign while b_n and residuals stay
    labels = [jk_sequence(0.5, k) for k in range(1, 9)]
    seq = [DensePolynomial([1.0])] + [solve_label(van_vleck_spectrum(SYMMETRIC, k), j)
                                      for k, j in enumerate(labels, 1)]
    mir = [DensePolynomial([1.0])] + [solve_label(van_vleck_spectrum(SYMMETRIC, k), k + 2 - j)
                                      for k, j in enumerate(labels, 1)]
    for n in range(2, 9):
        f, g = recurrence_fit(seq, n), recurrence_fit(mir, n)
        assert f.a_n == pytest.approx(-g.a_n, abs=1e-12)
        assert f.b_n == pytest.approx(g.b_n, abs=1e-12)
        assert f.residual_norm == pytest.approx(g.residual_norm, abs=1e-12)
        if n > 2:
            assert f.residual_norm > 1e-3 and abs(f.a_n) > 0.1
