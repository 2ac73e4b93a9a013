import math

import numpy as np
import pytest

from lamezeros.electrostatics import (ChargeConfiguration, configurations_csv, energy, energy_hessian,
                                      equilibrium_residual, solve_sector)
from lamezeros.errors import Collision
from lamezeros.spectrum import van_vleck_spectrum
from lamezeros.zeros import label_solutions
from systems import FIGURE1, SYMMETRIC, random_systems

NU_PLUS = (11 + math.sqrt(601)) / 20


def test_k1_residual_vanishes():
    f = equilibrium_residual([NU_PLUS], FIGURE1)
    assert abs(f[0]) <= 1e-12
    # the single force is B/A at the zero
    assert f[0] == pytest.approx(FIGURE1.B(NU_PLUS) / FIGURE1.A(NU_PLUS), abs=1e-12)


def test_spectral_zeros_are_equilibria_k32():
    for sol in label_solutions(van_vleck_spectrum(FIGURE1, 32))[::5]:
        assert np.max(np.abs(equilibrium_residual(sol.zeros, FIGURE1))) <= 1e-8


def test_perturbation_is_detected():
    sol = label_solutions(van_vleck_spectrum(FIGURE1, 10))[4]
    x = np.array(sol.zeros)
    x[3] += 1e-3
    assert np.max(np.abs(equilibrium_residual(x, FIGURE1))) > 1e-2


def test_collision():
    with pytest.raises(Collision):
        equilibrium_residual([0.5, 0.5], FIGURE1)
    with pytest.raises(Collision):
        equilibrium_residual([0.0], FIGURE1)
    with pytest.raises(Collision):
        ChargeConfiguration((0.5, 0.2), 0)


def test_sector_examples():
    c = solve_sector(FIGURE1, 6, 3)
    ref = label_solutions(van_vleck_spectrum(FIGURE1, 6))[3].zeros
    assert np.max(np.abs(np.array(c.positions) - ref)) <= 1e-8
    c1 = solve_sector(FIGURE1, 1, 0)
    assert c1.positions[0] == pytest.approx(NU_PLUS, abs=1e-12)
    c2 = solve_sector(SYMMETRIC, 2, 1)
    assert c2.positions[0] == pytest.approx(-c2.positions[1], abs=1e-14)


def test_gradient_is_minus_residual():
    rng = np.random.default_rng(8)
    for _ in range(100):
        s = random_systems(1, int(rng.integers(1 << 30)))[0]
        a1, a2, a3 = s.alpha
        k = int(rng.integers(1, 7))
        m = int(rng.integers(0, k + 1))
        x = np.sort(np.concatenate([rng.uniform(a1, a2, m), rng.uniform(a2, a3, k - m)]))
        if np.min(np.abs(np.diff(np.concatenate([[a1], x, [a3]])))) < 1e-3 or np.min(np.abs(x - a2)) < 1e-3:
            continue
        h = 1e-6
        f = equilibrium_residual(x, s)
        for i in range(k):
            e = np.zeros(k)
            e[i] = h
            g = (energy(x + e, s) - energy(x - e, s)) / (2 * h)
            assert g == pytest.approx(-f[i], rel=1e-5, abs=1e-5)


def test_equilibrium_is_strict_minimum():
    c = solve_sector(FIGURE1, 8, 5)
    assert np.min(np.linalg.eigvalsh(energy_hessian(c, FIGURE1))) > 0


def test_configurations_csv():
    text = configurations_csv([solve_sector(FIGURE1, 3, m) for m in range(4)])
    assert len(text.strip().split("\n")) == 5
