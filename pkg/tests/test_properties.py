"""Property tests over randomly drawn systems and inputs."""
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lamezeros.asymptotics import jk_sequence, nu_from_theta, theta_from_nu
from lamezeros.core import AffineMap, DensePolynomial, eval_poly, map_system, validate_system
from lamezeros.electrostatics import equilibrium_residual
from lamezeros.interlacing import check_cross_degree, check_same_degree, check_van_vleck_chain
from lamezeros.quadrature import jacobi_rule
from lamezeros.spectrum import build_operator, van_vleck_spectrum
from lamezeros.zeros import label_solutions

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def systems(draw):
    a1 = draw(st.floats(-3, 0))
    g1 = draw(st.floats(0.3, 3))
    g2 = draw(st.floats(0.3, 3))
    rho = [draw(st.floats(0.2, 3)) for _ in range(3)]
    return validate_system((a1, a1 + g1, a1 + g1 + g2), rho)


@SETTINGS
@given(systems(), st.integers(1, 10))
def test_counts_and_interlacing(system, k):
    sols = label_solutions(van_vleck_spectrum(system, k))
    sols1 = label_solutions(van_vleck_spectrum(system, k + 1))
    assert [s.left_count for s in sols] == list(range(k + 1))
    for a, b in zip(sols, sols[1:]):
        assert check_same_degree(a, b).holds
    for a in sols:
        for b in sols1:
            assert check_cross_degree(a, b).holds


@SETTINGS
@given(systems(), st.integers(1, 20))
def test_van_vleck_chain(system, k):
    assert check_van_vleck_chain(van_vleck_spectrum(system, k), van_vleck_spectrum(system, k + 1)).holds


@SETTINGS
@given(systems(), st.integers(1, 12))
def test_zeros_are_equilibria(system, k):
    for s in label_solutions(van_vleck_spectrum(system, k)):
        assert np.max(np.abs(equilibrium_residual(s.zeros, system))) <= 1e-8 * max(1.0, 1.0 / system.span)


@SETTINGS
@given(systems(), st.integers(1, 12), st.floats(0.2, 4.0), st.floats(-5, 5), st.booleans())
def test_affine_covariance(system, k, u, v, flip):
    u = -u if flip else u
    m = AffineMap(u, v)
    mapped = map_system(system, m)
    a = van_vleck_spectrum(system, k).nus
    b = van_vleck_spectrum(mapped, k).nus
    expect = np.sort(m.forward(a))
    assert np.max(np.abs(b - expect)) <= 1e-9 * mapped.span


@SETTINGS
@given(systems(), st.integers(1, 8), st.data())
def test_operator_matches_polynomial_expansion(system, k, data):
    c = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=k + 1, max_size=k + 1)))
    c[-1] = 1.0
    P = np.polynomial.Polynomial
    S = P(c)
    A = P.fromroots(system.alpha)
    B = sum(r * P.fromroots([a for i, a in enumerate(system.alpha) if i != j]) for j, r in enumerate(system.rho))
    muk = k * (k - 1 + sum(system.rho))
    T = (A * S.deriv(2) + B * S.deriv() - muk * P([0, 1]) * S).coef
    T = np.pad(T, (0, k + 2 - T.size))
    scale = np.max(np.abs(T)) + muk
    assert abs(T[k + 1]) <= 1e-12 * scale
    assert np.max(np.abs(build_operator(system, k).apply(c) - T[: k + 1])) <= 1e-12 * scale


@SETTINGS
@given(systems(), st.floats(0.0, 1.0))
def test_theta_round_trip(system, theta):
    nu = nu_from_theta(system, theta)
    assert abs(theta_from_nu(system, nu) - theta) <= 1e-8


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(1, 500))
def test_jk_steps(theta, k):
    j0, j1 = jk_sequence(theta, k), jk_sequence(theta, k + 1)
    assert 1 <= j0 <= k + 1 and j1 - j0 in (0, 1)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.95, 3.0), st.floats(-0.95, 3.0), st.integers(1, 20), st.integers(0, 10**6))
def test_jacobi_exactness(p, q, n, seed):
    r = jacobi_rule(-1.0, 1.0, p, q, n)
    assert np.all(r.weights > 0) and np.all(np.abs(r.nodes) < 1)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(2 * n)
    exact = jacobi_rule(-1.0, 1.0, p, q, n + 8).integrate(lambda t: np.polynomial.polynomial.polyval(t, c))
    got = r.integrate(lambda t: np.polynomial.polynomial.polyval(t, c))
    assert got == pytest.approx(exact, rel=1e-11, abs=1e-11 * r.weights.sum() * np.abs(c).sum())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8), st.floats(-2, 2))
def test_eval_poly_against_numpy(coeffs, x):
    if coeffs[-1] == 0:
        coeffs[-1] = 1.0
    p = DensePolynomial(coeffs)
    v, d1, d2 = eval_poly(p, x)
    P = np.polynomial.Polynomial(coeffs)
    scale = sum(abs(c) for c in coeffs) * max(1.0, abs(x)) ** len(coeffs) * len(coeffs) ** 2
    assert abs(v - P(x)) <= 1e-14 * scale
    assert abs(d1 - P.deriv()(x)) <= 1e-14 * scale
    assert abs(d2 - P.deriv(2)(x)) <= 1e-14 * scale
