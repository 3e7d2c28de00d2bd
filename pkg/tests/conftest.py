import pytest

from circlepat import files


@pytest.fixture(scope="session")
def regular():
    return files.load_bundled_surface("genus2_regular.surface")


@pytest.fixture(scope="session")
def quad():
    return files.load_bundled_surface("genus2_quad.surface")


@pytest.fixture(scope="session")
def pocket():
    return files.load_bundled_surface("genus2_pocket.surface")


@pytest.fixture(scope="session")
def mixed():
    return files.load_bundled_surface("genus2_mixed.surface")
