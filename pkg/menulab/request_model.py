from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

# Input file schemas. Rationals arrive as "p/q" or decimal strings (or JSON integers)
# and are converted exactly by the domain models.

RationalText = Union[str, int, float]


class JointAtom(BaseModel):
    values: list[RationalText]
    prob: RationalText


class DistributionFile(BaseModel):
    items: int = Field(ge=1, le=16)
    kind: Literal['product', 'joint']
    marginals: Optional[list[list[tuple[RationalText, RationalText]]]] = None
    atoms: Optional[list[JointAtom]] = None

    @model_validator(mode='after')
    def _check_kind(self):
        if self.kind == 'product':
            if self.marginals is None:
                raise ValueError("product distributions need 'marginals'")
            if len(self.marginals) != self.items:
                raise ValueError(f"{len(self.marginals)} marginals given for {self.items} items")
        else:
            if self.atoms is None:
                raise ValueError("joint distributions need 'atoms'")
        return self


class MenuFile(BaseModel):
    items: int = Field(ge=1, le=16)
    prices: dict[str, RationalText]


class GridFile(BaseModel):
    items: int = Field(ge=1, le=16)
    prices: dict[str, list[RationalText]]


class EntryFile(BaseModel):
    alloc: list[RationalText]
    pay: RationalText


class RandomizedMenuFile(BaseModel):
    items: int = Field(ge=1, le=16)
    entries: list[EntryFile]
