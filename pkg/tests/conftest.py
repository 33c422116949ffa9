import numpy as np
import pytest

from qpwave.bifurcation import build_green_basis
from qpwave.elliptic import find_m_bar
from qpwave.fourier_field import FourierField2, SpaceWeights


@pytest.fixture(scope="session")
def profile():
    return find_m_bar(1e-13)


@pytest.fixture(scope="session")
def basis(profile):
    return build_green_basis(profile, grid=4096, n_modes=256)


def random_even_field(weights: SpaceWeights, rng, decay: float = 0.3,
                      unit_norm: bool = False) -> FourierField2:
    """Random real even field; coefficients decay away from the origin so the
    weighted norm stays finite-looking at moderate sigma."""
    N = weights.N
    k = np.arange(-N, N + 1)
    r = np.sqrt(k[:, None] ** 2 + k[None, :] ** 2)
    c = rng.standard_normal((2 * N + 1, 2 * N + 1)) * np.exp(-decay * r)
    u = FourierField2(weights, c)
    if unit_norm:
        u = u.scaled(1.0 / u.norm())
    return u
