import numpy as np
import pytest

from confweight import ConformalMap, DomainFamily, default_seed, make_bump_family

ALL_FAMILIES = tuple(DomainFamily)


@pytest.fixture
def rng():
    return np.random.default_rng(default_seed())


@pytest.fixture
def bumps(rng):
    return make_bump_family(5, rng=rng)


@pytest.fixture(params=[f.value for f in DomainFamily])
def family(request):
    return DomainFamily(request.param)


@pytest.fixture
def to_disc(family):
    return ConformalMap.to_disc(family)
