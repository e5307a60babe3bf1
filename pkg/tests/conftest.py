import pytest

from menulab.utils.data import load_distribution, load_menu, load_randomized_menu


@pytest.fixture(scope='session')
def example4():
    return load_distribution('example4')


@pytest.fixture(scope='session')
def example5():
    return load_distribution('example5-eps-1/100')


@pytest.fixture(scope='session')
def example6():
    return load_distribution('example6-eps-1/10')


@pytest.fixture(scope='session')
def example7_types():
    return load_distribution('example7')


@pytest.fixture(scope='session')
def example7_menu():
    return load_randomized_menu('example7')


@pytest.fixture(scope='session')
def example4_menu():
    return load_menu('example4')
