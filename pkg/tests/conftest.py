import pytest

from meanking import bases, retrodiction


@pytest.fixture(scope="session")
def mub2():
    return bases.gen_mub(2)


@pytest.fixture(scope="session")
def mub3():
    return bases.gen_mub(3)


@pytest.fixture(scope="session")
def strategy_d2(mub2):
    return retrodiction.build_strategy(mub2)


@pytest.fixture(scope="session")
def strategy_d3(mub3):
    return retrodiction.build_strategy(mub3)
