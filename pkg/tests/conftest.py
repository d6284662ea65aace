import numpy as np
import pytest

from nullasym import create_runner
from nullasym.models.geometry import SphereGrid
from nullasym.models.profiles import get_preset, smearing_profile


@pytest.fixture
def runner(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return create_runner('testing')


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope='session')
def sphere_grid():
    return SphereGrid.product(32)


@pytest.fixture(scope='session')
def tanh_profile():
    return get_preset('tanh').profile


@pytest.fixture(scope='session')
def smearing():
    return smearing_profile()
