"""
Shared fixtures: windows, small signals and coefficient axes.
"""

import numpy as np
import pytest

from stockwell.transforms.grids import SignalGrid2D, make_coefficient_axes
from stockwell.transforms.signals import gaussian_ring
from stockwell.transforms.windows import freq_bump_window


@pytest.fixture(scope="session")
def bump():
    return freq_bump_window(1.0, 1.0)


@pytest.fixture(scope="session")
def narrow_bump():
    return freq_bump_window(1.5, 0.5)


@pytest.fixture(scope="session")
def fine_ring():
    """Band limited ring on a fine grid, negligible at the boundary."""
    return gaussian_ring(SignalGrid2D.centered(128, 0.15), 3.0, 0.5, shift=(0.3, -0.2))


@pytest.fixture(scope="session")
def fine_axes():
    return make_coefficient_axes(8, (-9.0, 9.0, 61), (0.5, 3.0, 5))


@pytest.fixture(scope="session")
def small_ring():
    return gaussian_ring(SignalGrid2D.centered(48, 0.3), 2.0, 0.6, shift=(0.2, 0.1))


@pytest.fixture(scope="session")
def small_axes():
    return make_coefficient_axes(8, (-7.2, 7.2, 25), (0.5, 2.5, 4))


@pytest.fixture
def rng():
    return np.random.default_rng(7)

