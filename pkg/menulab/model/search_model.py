from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from menulab.model.menu_model import MAX_ITEMS, Menu, bundle_key, bundle_order
from menulab.utils.rational import Rational


class GridMode(str, Enum):
    INTEGER = 'integer-grid'
    SUPPORT_SUMS = 'support-sums'
    EXPLICIT = 'explicit'


class SearchConstraint(str, Enum):
    UNRESTRICTED = 'unrestricted'
    SYMMETRIC = 'symmetric'
    SUBMODULAR = 'submodular'
    SYMMETRIC_SUBMODULAR = 'symmetric-and-submodular'
    ADDITIVE = 'additive'
    BUNDLE_ONLY = 'bundle-only'

    @classmethod
    def parse(cls, text: str) -> 'SearchConstraint':
        if text == 'symmetric-submodular':
            return cls.SYMMETRIC_SUBMODULAR
        return cls(text)


class CandidateGrid(BaseModel):
    """Candidate prices per bundle, in bundle order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1, le=MAX_ITEMS)
    mode: GridMode
    prices: tuple[tuple[Rational, ...], ...]

    @model_validator(mode='after')
    def _check(self):
        if len(self.prices) != (1 << self.n) - 1:
            raise ValueError(f"grid for {self.n} items needs {(1 << self.n) - 1} price sets")
        for bundle, options in zip(bundle_order(self.n), self.prices):
            if not options:
                raise ValueError(f"empty price set for bundle {{{bundle_key(bundle)}}}")
            if list(options) != sorted(set(options)):
                raise ValueError(f"price set for bundle {{{bundle_key(bundle)}}} is not sorted and distinct")
            if options[0] < 0:
                raise ValueError(f"negative candidate price for bundle {{{bundle_key(bundle)}}}")
        return self

    def options(self, bundle: int) -> tuple[Fraction, ...]:
        return self.prices[bundle_order(self.n).index(bundle)]

    @property
    def size(self) -> int:
        total = 1
        for options in self.prices:
            total *= len(options)
        return total


class SearchResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best: Menu
    revenue: Rational
    examined: int
    constraint: SearchConstraint
    mode: GridMode
    pruned: bool = False
    elapsed: float = 0.0


class GapReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    drev: SearchResult
    srev: SearchResult
    brev: SearchResult
    smdrev: SearchResult
    symdrev: SearchResult
    ratios: dict[str, Optional[Rational]]
