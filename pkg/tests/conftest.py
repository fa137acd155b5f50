import pytest

from keller import build_counterexample


@pytest.fixture(scope="session")
def s10():
    return build_counterexample(10)


@pytest.fixture(scope="session")
def s12():
    return build_counterexample(12)
