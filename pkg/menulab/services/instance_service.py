"""Seeded random instances for the property suites run by ``reproduce``."""
from fractions import Fraction

import numpy as np

from menulab.model.distribution_model import JointDistribution, SingleItemDistribution
from menulab.model.menu_model import Menu

MAX_ATOMS = 5
MAX_VALUE = 20


def _weights(rng: np.random.Generator, count: int) -> list[Fraction]:
    raw = [int(x) for x in rng.integers(1, 11, size=count)]
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def random_marginal(rng: np.random.Generator, max_atoms: int = MAX_ATOMS,
                    max_value: int = MAX_VALUE) -> SingleItemDistribution:
    count = int(rng.integers(1, max_atoms + 1))
    values = rng.choice(max_value + 1, size=min(count, max_value + 1), replace=False)
    return SingleItemDistribution(atoms=list(zip((int(v) for v in values), _weights(rng, len(values)))))


def random_joint(rng: np.random.Generator, n: int = 2, max_atoms: int = MAX_ATOMS,
                 max_value: int = MAX_VALUE) -> JointDistribution:
    """Arbitrary (correlated) joint over integer valuations."""
    count = int(rng.integers(1, max_atoms + 1))
    values = [tuple(int(x) for x in rng.integers(0, max_value + 1, size=n)) for _ in range(count)]
    return JointDistribution(n=n, atoms=list(zip(values, _weights(rng, count))))


def random_exchangeable(rng: np.random.Generator, max_atoms: int = MAX_ATOMS,
                        max_value: int = MAX_VALUE) -> JointDistribution:
    """Two-item joint invariant under swapping the items."""
    count = int(rng.integers(1, max_atoms + 1))
    atoms = []
    for weight in _weights(rng, count):
        x, y = (int(v) for v in rng.integers(0, max_value + 1, size=2))
        atoms += [((x, y), weight / 2), ((y, x), weight / 2)]
    return JointDistribution(n=2, atoms=atoms)


def random_supermodular_menu(rng: np.random.Generator, max_price: int = MAX_VALUE) -> Menu:
    a, b = (int(x) for x in rng.integers(0, max_price + 1, size=2))
    c = a + b + int(rng.integers(1, max_price + 1))
    return Menu.of(a, b, c)


def random_submodular_menu(rng: np.random.Generator, max_price: int = MAX_VALUE) -> Menu:
    a, b = (int(x) for x in rng.integers(0, max_price + 1, size=2))
    c = int(rng.integers(max(a, b), a + b + 1))
    return Menu.of(a, b, c)


def random_asymmetric_submodular_menu(rng: np.random.Generator, max_price: int = MAX_VALUE) -> Menu:
    a, b = (int(x) for x in rng.choice(max_price + 1, size=2, replace=False))
    c = int(rng.integers(max(a, b), a + b + 1))
    return Menu.of(a, b, c)
