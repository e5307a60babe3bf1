from fractions import Fraction

from hypothesis import strategies as st

from menulab.model.distribution_model import JointDistribution, SingleItemDistribution
from menulab.model.menu_model import Menu


def _weights(draw, count: int) -> list[Fraction]:
    raw = draw(st.lists(st.integers(1, 10), min_size=count, max_size=count))
    return [Fraction(x, sum(raw)) for x in raw]


@st.composite
def marginals(draw, max_atoms: int = 5, max_value: int = 20):
    values = draw(st.lists(st.integers(0, max_value), min_size=1, max_size=max_atoms, unique=True))
    return SingleItemDistribution(atoms=list(zip(values, _weights(draw, len(values)))))


@st.composite
def joints(draw, n: int = 2, max_atoms: int = 5, max_value: int = 20):
    values = draw(st.lists(st.tuples(*[st.integers(0, max_value)] * n), min_size=1, max_size=max_atoms,
                           unique=True))
    return JointDistribution(n=n, atoms=list(zip(values, _weights(draw, len(values)))))


@st.composite
def exchangeable_joints(draw, max_atoms: int = 4, max_value: int = 20):
    pairs = draw(st.lists(st.tuples(st.integers(0, max_value), st.integers(0, max_value)),
                          min_size=1, max_size=max_atoms))
    atoms = []
    for (x, y), weight in zip(pairs, _weights(draw, len(pairs))):
        atoms += [((x, y), weight / 2), ((y, x), weight / 2)]
    return JointDistribution(n=2, atoms=atoms)


@st.composite
def menus(draw, n: int = 2, max_price: int = 20):
    prices = draw(st.lists(st.integers(0, max_price), min_size=(1 << n) - 1, max_size=(1 << n) - 1))
    return Menu(n=n, prices=prices)


@st.composite
def normalized_menus(draw, max_price: int = 20):
    a, b = draw(st.integers(0, max_price)), draw(st.integers(0, max_price))
    c = draw(st.integers(max(a, b), 2 * max_price + 1))
    return Menu.of(a, b, c)


@st.composite
def supermodular_menus(draw, max_price: int = 20):
    a, b = draw(st.integers(0, max_price)), draw(st.integers(0, max_price))
    return Menu.of(a, b, a + b + draw(st.integers(1, max_price)))


@st.composite
def submodular_menus(draw, max_price: int = 20):
    a, b = draw(st.integers(0, max_price)), draw(st.integers(0, max_price))
    return Menu.of(a, b, draw(st.integers(max(a, b), a + b)))


@st.composite
def asymmetric_submodular_menus(draw, max_price: int = 20):
    a = draw(st.integers(0, max_price))
    b = draw(st.integers(0, max_price).filter(lambda x: x != a))
    return Menu.of(a, b, draw(st.integers(max(a, b), a + b)))


def rationals(max_value: int = 30):
    return st.fractions(min_value=0, max_value=max_value, max_denominator=4)


def valuations(n: int = 2, max_value: int = 30):
    return st.tuples(*[rationals(max_value)] * n)
