import pytest

from cuspslope.lattice import CuspShape


@pytest.fixture
def rect4():
    return CuspShape.from_components(1, 0, 0, 4, name="rect4")
