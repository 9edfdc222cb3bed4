import pytest

from b5gcell import default_bundle


@pytest.fixture
def bundle():
    return default_bundle()
