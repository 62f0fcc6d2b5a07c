"""
Pytest configuration and shared fixtures
"""

import pytest
from hypothesis import settings

from coarsedeg.core.lattice import Window
from coarsedeg.maps.ast_nodes import Antipodal, Identity, Reflection

settings.register_profile("coarsedeg", max_examples=50, deadline=None)
settings.load_profile("coarsedeg")


@pytest.fixture
def window2():
    """Planar window [-4, 4]^2"""
    return Window(n=2, L=4)


@pytest.fixture
def window8():
    """Planar window [-8, 8]^2 used by the degree tests"""
    return Window(n=2, L=8)


@pytest.fixture
def identity2():
    """Identity of the plane"""
    return Identity(domain_dim=2)


@pytest.fixture
def antipodal2():
    """Antipodal map of the plane"""
    return Antipodal(domain_dim=2)


@pytest.fixture
def reflection2():
    """Reflection of the plane in the first coordinate"""
    return Reflection(domain_dim=2, axis=0)
