from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from menulab.model.menu_model import MAX_ITEMS
from menulab.utils.rational import Rational, fraction_str

Number = Union[Fraction, float]


class CombinationRule(str, Enum):
    CAPPED_ADDITIVE = 'capped-additive'
    INDEPENDENT = 'independent-lotteries-nonadaptive'

    @classmethod
    def parse(cls, text: str) -> 'CombinationRule':
        aliases = {'capped': cls.CAPPED_ADDITIVE, 'independent': cls.INDEPENDENT}
        return aliases.get(text) or cls(text)


class MenuEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    allocation: tuple[Rational, ...]
    payment: Rational

    @model_validator(mode='after')
    def _check(self):
        for q in self.allocation:
            if not 0 <= q <= 1:
                raise ValueError(f"allocation probability {fraction_str(q)} outside [0,1]")
        if self.payment < 0:
            raise ValueError(f"negative payment {fraction_str(self.payment)}")
        return self

    @property
    def is_null(self) -> bool:
        return self.payment == 0 and not any(self.allocation)


class RandomizedMenu(BaseModel):
    """Menu of lotteries; the null entry is always present (first when added here)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1, le=MAX_ITEMS)
    entries: tuple[MenuEntry, ...]

    @field_validator('entries')
    @classmethod
    def _null_present(cls, entries, info: ValidationInfo):
        n = info.data.get('n')
        for entry in entries:
            if len(entry.allocation) != n:
                raise ValueError(f"entry allocation has {len(entry.allocation)} items, expected {n}")
        if not any(entry.is_null for entry in entries):
            null = MenuEntry(allocation=(Fraction(0),) * n, payment=Fraction(0))
            entries = (null,) + tuple(entries)
        return entries


class DirectMechanism(BaseModel):
    """Allocation and payment per type; exact (Fraction) or floating point."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    types: tuple[tuple[Rational, ...], ...]
    allocations: tuple[tuple[Number, ...], ...]
    payments: tuple[Number, ...]

    @field_validator('allocations', 'payments', mode='before')
    @classmethod
    def _tuples(cls, value):
        return tuple(tuple(x) if isinstance(x, (list, tuple)) else x for x in value)

    @model_validator(mode='after')
    def _check(self):
        if not len(self.types) == len(self.allocations) == len(self.payments):
            raise ValueError("types, allocations and payments differ in length")
        return self

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for p in self.payments) and all(
            isinstance(q, Fraction) for row in self.allocations for q in row)

    def outcome(self, t: int) -> tuple[tuple[Number, ...], Number]:
        return self.allocations[t], self.payments[t]


class ICViolation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: str  # 'IC' or 'IR'
    type_index: int
    deviation_index: Optional[int] = None
    gain: float


class ICReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    constraints_checked: int
    violations: tuple[ICViolation, ...]


class Deviation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    picks: tuple[int, ...]
    utility: Rational
    truthful_utility: Rational

    @property
    def improvement(self) -> Fraction:
        return self.utility - self.truthful_utility

    @property
    def false_name_proof(self) -> bool:
        return self.utility <= self.truthful_utility


class LPSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mechanism: DirectMechanism
    revenue: Number
    exact: bool
    method: str
    primal_residual: float = 0.0
    dual_residual: Optional[float] = None
