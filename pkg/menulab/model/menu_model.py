from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from pydantic import BaseModel, ConfigDict, Field, model_validator

from menulab.utils.rational import Rational, fraction_str

MAX_ITEMS = 16

# Bundles are bitmasks over items 1..n: bit i-1 set means item i is in the bundle.


def bundle_items(bundle: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(bundle.bit_length()) if bundle >> i & 1)


def bundle_size(bundle: int) -> int:
    return bin(bundle).count('1')


def bundle_of(items: Iterable[int]) -> int:
    mask = 0
    for item in items:
        mask |= 1 << (item - 1)
    return mask


def bundle_key(bundle: int) -> str:
    return ','.join(str(i) for i in bundle_items(bundle))


@lru_cache(maxsize=None)
def bundle_order(n: int) -> tuple[int, ...]:
    """Nonempty bundles: singletons ascending, then pairs, then larger."""
    masks = range(1, 1 << n)
    return tuple(sorted(masks, key=lambda m: (bundle_size(m), bundle_items(m))))


@lru_cache(maxsize=None)
def bundle_index(n: int) -> dict[int, int]:
    return {bundle: k for k, bundle in enumerate(bundle_order(n))}


def menu_length_items(length: int) -> int:
    n = (length + 1).bit_length() - 1
    if length < 1 or (1 << n) - 1 != length:
        raise ValueError(f"{length} prices do not form a menu (need 2^n - 1)")
    return n


class Menu(BaseModel):
    """Deterministic menu: one price per nonempty bundle, in bundle order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1, le=MAX_ITEMS)
    prices: tuple[Rational, ...]

    @model_validator(mode='after')
    def _check(self):
        if len(self.prices) != (1 << self.n) - 1:
            raise ValueError(f"a {self.n}-item menu needs {(1 << self.n) - 1} prices, got {len(self.prices)}")
        for bundle, price in zip(bundle_order(self.n), self.prices):
            if price < 0:
                raise ValueError(f"negative price {fraction_str(price)} for bundle {{{bundle_key(bundle)}}}")
        return self

    @classmethod
    def of(cls, *prices) -> 'Menu':
        """``Menu.of(a, b, c)`` or the 7-tuple ``(p1, p2, p3, p12, p13, p23, p123)``."""
        return cls(n=menu_length_items(len(prices)), prices=prices)

    @classmethod
    def from_map(cls, n: int, prices: dict[int, Fraction]) -> 'Menu':
        return cls(n=n, prices=tuple(prices[b] for b in bundle_order(n)))

    def price(self, bundle: int) -> Fraction:
        if bundle == 0:
            return Fraction(0)
        return self.prices[bundle_index(self.n)[bundle]]

    def as_map(self) -> dict[int, Fraction]:
        return dict(zip(bundle_order(self.n), self.prices))

    def _two(self) -> None:
        if self.n != 2:
            raise ValueError("a/b/c accessors exist only for two items")

    @property
    def a(self) -> Fraction:
        self._two()
        return self.prices[0]

    @property
    def b(self) -> Fraction:
        self._two()
        return self.prices[1]

    @property
    def c(self) -> Fraction:
        self._two()
        return self.prices[2]

    def swapped(self) -> 'Menu':
        """Two-item menu with the item labels exchanged."""
        return Menu.of(self.b, self.a, self.c)

    def __str__(self) -> str:
        return '(' + ','.join(fraction_str(p) for p in self.prices) + ')'
