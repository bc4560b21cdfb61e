import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ratsurf.construction import construct_d8, construct_e8, twist_nontorsion  # noqa: E402


@pytest.fixture(scope="session")
def e8():
    return construct_e8(0, 1)


@pytest.fixture(scope="session")
def d8():
    return construct_d8()


@pytest.fixture(scope="session")
def e8_twisted(e8):
    return twist_nontorsion(e8, 1)


@pytest.fixture(scope="session")
def d8_twisted(d8):
    return twist_nontorsion(d8, 1)
