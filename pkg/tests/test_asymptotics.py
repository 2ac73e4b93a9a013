import math

import numpy as np
import pytest
from scipy.integrate import quad

from lamezeros.asymptotics import (DensityModel, _cdf_v_direct, _stieltjes_pieces, jk_sequence, ks_distance,
                                   nu_from_theta, rho_S, rho_V, theta_c, theta_from_nu)
from lamezeros.errors import EmptySample, OutOfRange, OutOfSupport
from lamezeros.spectrum import van_vleck_spectrum
from systems import FIGURE1, SYMMETRIC, random_systems


def _quad_mass(f, system, extra=()):
    pts = sorted(set(system.alpha) | set(extra))
    return sum(quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)[0] for a, b in zip(pts[:-1], pts[1:]))


def test_rho_v_mass_two_routes():
    assert DensityModel("vanvleck", FIGURE1).mass() == pytest.approx(1.0, abs=1e-12)
    assert _quad_mass(lambda x: rho_V(FIGURE1, x), FIGURE1) == pytest.approx(1.0, abs=1e-6)


def test_rho_v_symmetric():
    x = np.linspace(0.01, 0.99, 50)
    assert np.max(np.abs(rho_V(SYMMETRIC, x) - rho_V(SYMMETRIC, -x))) <= 1e-10


def test_rho_v_rejects_alpha2():
    with pytest.raises(OutOfSupport):
        rho_V(FIGURE1, 0.0)
    with pytest.raises(OutOfSupport):
        rho_V(FIGURE1, 2.5)


def test_rho_v_quantiles_within_ks():
    nus = van_vleck_spectrum(FIGURE1, 128).nus
    model = DensityModel("vanvleck", FIGURE1)
    d = ks_distance(nus, model)
    n = len(nus)
    f = model.cdf(nus)
    assert np.max(np.abs(f - (np.arange(1, n + 1) - 0.5) / n)) <= d + 0.5 / n


def test_rho_s_examples():
    a1, a2, a3 = FIGURE1.alpha
    x = np.linspace(a1 + 1e-3, a2 - 1e-3, 40)
    arcsin = 1 / (math.pi * np.sqrt((x - a1) * (a2 - x)))
    assert np.max(np.abs(rho_S(FIGURE1, a3, x) - arcsin)) <= 1e-10
    assert rho_S(FIGURE1, a3, 1.0) == 0.0
    full = np.linspace(a1 + 1e-3, a3 - 1e-3, 101)
    full = full[full != a2]
    assert np.all(rho_S(FIGURE1, a2, full) > 0)
    assert rho_S(FIGURE1, 0.7, 0.3) == 0.0 and rho_S(FIGURE1, -0.5, -0.2) == 0.0


def test_theta_examples():
    assert theta_from_nu(FIGURE1, -1.0) == 0.0
    closed = 2 / math.pi * math.asin(math.sqrt(1 / 3))
    assert theta_from_nu(FIGURE1, 0.0) == pytest.approx(closed, abs=1e-12)
    assert theta_c(FIGURE1) == pytest.approx(0.391827, abs=1e-6)
    assert theta_from_nu(SYMMETRIC, 0.0) == pytest.approx(0.5, abs=1e-10)
    with pytest.raises(OutOfRange):
        theta_from_nu(FIGURE1, 2.5)


def test_nu_from_theta_examples():
    assert nu_from_theta(FIGURE1, 0.0) == -1.0 and nu_from_theta(FIGURE1, 1.0) == 2.0
    assert nu_from_theta(FIGURE1, theta_c(FIGURE1)) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(OutOfRange):
        nu_from_theta(FIGURE1, 1.5)
    rng = np.random.default_rng(11)
    for nu in rng.uniform(-1, 2, 10):
        th = theta_from_nu(FIGURE1, nu)
        back = nu_from_theta(FIGURE1, th)
        assert back == pytest.approx(nu, abs=1e-7)
        assert abs(theta_from_nu(FIGURE1, back) - th) <= 1e-8


def test_theta_monotone():
    for s in (FIGURE1, random_systems(1, 13)[0]):
        nus = np.linspace(s.alpha[0], s.alpha[2], 200)
        th = np.array([theta_from_nu(s, v) for v in nus])
        assert np.all(np.diff(th) > 0)


def test_jk_examples():
    assert all(jk_sequence(0.0, k) == 1 for k in range(1, 50))
    assert jk_sequence(0.5, 6) == 4
    assert all(jk_sequence(1.0, k) == k + 1 for k in range(1, 50))
    seq = [jk_sequence(0.37, k) for k in range(1, 201)]
    assert set(np.diff(seq)) <= {0, 1}


def test_ks_quantile_samples():
    model = DensityModel("stieltjes", FIGURE1, 0.4)
    n = 60
    targets = (np.arange(1, n + 1) - 0.5) / n
    lo, hi = FIGURE1.alpha[0], FIGURE1.alpha[2]
    samples = []
    for t in targets:
        a, b = lo, hi
        for _ in range(100):
            m = 0.5 * (a + b)
            a, b = (m, b) if model.cdf_direct(m) < t else (a, m)
        samples.append(0.5 * (a + b))
    assert ks_distance(samples, model) <= 1 / (2 * n) + 1e-6
    with pytest.raises(EmptySample):
        ks_distance([], model)


def test_masses_and_cdf_at_alpha2():
    rng = np.random.default_rng(14)
    for s in random_systems(3, 15):
        for nu in rng.uniform(s.alpha[0], s.alpha[2], 3):
            m = DensityModel("stieltjes", s, nu)
            assert m.mass() == pytest.approx(1.0, abs=1e-10)
            if nu >= s.alpha[1]:
                assert m.cdf_direct(s.alpha[1]) == pytest.approx(theta_from_nu(s, nu), abs=1e-12)
                assert m.cdf(s.alpha[1]) == pytest.approx(theta_from_nu(s, nu), abs=1e-6)


def test_cached_cdf_matches_direct():
    for m in (DensityModel("vanvleck", FIGURE1), DensityModel("stieltjes", FIGURE1, 0.9)):
        xs = np.linspace(-0.999, 1.999, 61)
        direct = np.array([m.cdf_direct(x) for x in xs])
        # the log singularity of rho_V at alpha2 limits the 512-point table to ~2e-7
        assert np.max(np.abs(m.cdf(xs) - direct)) <= 1e-6
        assert np.all(np.diff(m.cdf(xs)) >= 0)


def test_self_convergence_at_64_nodes():
    a3 = FIGURE1.alpha[2]
    m64, m128 = _cdf_v_direct(FIGURE1, a3, 64), _cdf_v_direct(FIGURE1, a3, 128)
    assert abs(m128 - m64) <= 1e-10 * abs(m128)
    for x in (-0.5, 0.7):
        assert abs(rho_V(FIGURE1, x, 64) - rho_V(FIGURE1, x, 128)) <= 1e-10 * rho_V(FIGURE1, x, 128)
    for nu in (-0.6, 0.0, 1.3):
        for piece in _stieltjes_pieces(FIGURE1, nu):
            i64, i128 = piece.integral(64), piece.integral(128)
            assert abs(i128 - i64) <= 1e-10 * abs(i128)


def test_model_validation():
    with pytest.raises(ValueError):
        DensityModel("other", FIGURE1)
    with pytest.raises(OutOfRange):
        DensityModel("stieltjes", FIGURE1, None)
