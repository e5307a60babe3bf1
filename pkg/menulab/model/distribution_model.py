from collections import defaultdict
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from menulab.model.menu_model import MAX_ITEMS
from menulab.utils.rational import Rational, fraction_str, parse_rational

Valuation = tuple[Fraction, ...]


def _merge(pairs, key) -> list:
    merged = defaultdict(Fraction)
    for value, prob in pairs:
        merged[key(value)] += parse_rational(prob)
    return sorted(merged.items())


def _check_mass(probabilities) -> None:
    total = Fraction(0)
    for prob in probabilities:
        if prob <= 0:
            raise ValueError(f"probability {fraction_str(prob)} is not positive")
        total += prob
    if total != 1:
        raise ValueError(f"mass {fraction_str(total)} ≠ 1")


class SingleItemDistribution(BaseModel):
    """Finitely supported value distribution of one item, atoms sorted by value."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    atoms: tuple[tuple[Rational, Rational], ...]

    @field_validator('atoms', mode='before')
    @classmethod
    def _canonical(cls, atoms: Any):
        return tuple(_merge(atoms, parse_rational))

    @model_validator(mode='after')
    def _check(self):
        for value, _ in self.atoms:
            if value < 0:
                raise ValueError(f"negative value {fraction_str(value)}")
        _check_mass(p for _, p in self.atoms)
        return self

    @classmethod
    def uniform(cls, values) -> 'SingleItemDistribution':
        """Uniform over a multiset, e.g. ``[0, 1, 2, 2, 2, 2, 5, 6, 6, 6]``."""
        values = list(values)
        return cls(atoms=[(v, Fraction(1, len(values))) for v in values])

    @classmethod
    def point(cls, value) -> 'SingleItemDistribution':
        return cls(atoms=[(value, 1)])

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    def tail(self, price) -> Fraction:
        """Pr[v >= price]"""
        return sum((p for v, p in self.atoms if v >= price), Fraction(0))

    def between(self, low, high) -> Fraction:
        """Pr[low <= v < high]"""
        return sum((p for v, p in self.atoms if low <= v < high), Fraction(0))


class JointDistribution(BaseModel):
    """Finitely supported distribution over n-item valuation vectors."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1, le=MAX_ITEMS)
    atoms: tuple[tuple[tuple[Rational, ...], Rational], ...]

    @field_validator('atoms', mode='before')
    @classmethod
    def _canonical(cls, atoms: Any):
        return tuple(_merge(atoms, lambda v: tuple(parse_rational(x) for x in v)))

    @model_validator(mode='after')
    def _check(self):
        for values, _ in self.atoms:
            if len(values) != self.n:
                raise ValueError(f"valuation {_show(values)} has {len(values)} entries, expected {self.n}")
            for x in values:
                if x < 0:
                    raise ValueError(f"negative value {fraction_str(x)} in valuation {_show(values)}")
        _check_mass(p for _, p in self.atoms)
        return self

    @classmethod
    def point(cls, *values) -> 'JointDistribution':
        return cls(n=len(values), atoms=[(values, 1)])

    @property
    def valuations(self) -> tuple[Valuation, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    def probability(self, predicate) -> Fraction:
        return sum((p for v, p in self.atoms if predicate(v)), Fraction(0))


def _show(values) -> str:
    return '(' + ','.join(fraction_str(x) for x in values) + ')'
