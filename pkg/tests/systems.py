"""Deterministic problem instances shared by tests and the fixture script."""
import numpy as np

from lamezeros.core import validate_system

FIGURE1 = validate_system((-1.0, 0.0, 2.0), (1.0, 2.0, 1.0 / 3.0))
SYMMETRIC = validate_system((-1.0, 0.0, 1.0), (1.0, 2.0, 1.0))


def random_system(rng):
    """alpha1 in [-3, 0], gaps in [0.3, 3], charges in [0.2, 3]."""
    a1 = rng.uniform(-3.0, 0.0)
    g1, g2 = rng.uniform(0.3, 3.0, 2)
    rho = rng.uniform(0.2, 3.0, 3)
    return validate_system((a1, a1 + g1, a1 + g1 + g2), tuple(rho))


def random_systems(n, seed):
    rng = np.random.default_rng(seed)
    return [random_system(rng) for _ in range(n)]
