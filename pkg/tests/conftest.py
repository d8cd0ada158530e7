import pytest
from fractions import Fraction

from closedforms import ORACLES
from exact_kernel import set_verification, verification_enabled
from ybe_checks import SolutionHandle


@pytest.fixture(autouse=True)
def verified_kernel():
    """Re-substitute every solve and inverse while the tests run."""
    previous = verification_enabled()
    set_verification(True)
    yield
    set_verification(previous)


@pytest.fixture
def r21():
    return SolutionHandle.for_pair(2, 1)


@pytest.fixture
def r32():
    return SolutionHandle.for_pair(3, 2)


@pytest.fixture
def yang2():
    return SolutionHandle.from_formula(ORACLES["yang2"])


@pytest.fixture
def r21_closed_handle():
    return SolutionHandle.from_formula(ORACLES["r21"])


@pytest.fixture
def generic_point():
    """(v, y1, y2) away from every pole of the small cases."""
    return Fraction(2, 3), Fraction(-1, 2), Fraction(5, 3)
