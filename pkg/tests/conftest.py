import pytest

from dgkoszul.exactlinalg import FieldSpec
from dgkoszul.gradedcomplex import DegreeWindow


@pytest.fixture(scope="session")
def F2():
    return FieldSpec.prime(2)


@pytest.fixture(scope="session")
def F5():
    return FieldSpec.prime(5)


@pytest.fixture(scope="session")
def Q():
    return FieldSpec.rationals()


@pytest.fixture(scope="session")
def window():
    return DegreeWindow(-16, 16)
