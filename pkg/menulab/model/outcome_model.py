from typing import Literal

from pydantic import BaseModel, ConfigDict

from menulab.model.menu_model import Menu, bundle_items
from menulab.utils.rational import Rational


class BuyerOutcome(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bundle: int  # bitmask, 0 = nothing bought
    payment: Rational
    utility: Rational

    @property
    def items(self) -> tuple[int, ...]:
        return bundle_items(self.bundle)


class HalfPlane(BaseModel):
    """``coefficients . v >= rhs`` (``>`` when strict)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: tuple[int, ...]
    rhs: Rational
    strict: bool

    def holds(self, v) -> bool:
        lhs = sum(c * x for c, x in zip(self.coefficients, v))
        return lhs > self.rhs if self.strict else lhs >= self.rhs


class Region(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bundle: int
    payment: Rational
    constraints: tuple[HalfPlane, ...]
    # polygon of the region's closure, clipped to the plotting box
    vertices: tuple[tuple[Rational, Rational], ...]

    def contains(self, v) -> bool:
        return all(h.holds(v) for h in self.constraints)


class RegionPartition2(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    menu: Menu
    kind: Literal['submodular', 'supermodular', 'additive']
    markers: dict[str, Rational]
    box: Rational
    regions: tuple[Region, ...]

    def region(self, bundle: int) -> Region:
        return next(r for r in self.regions if r.bundle == bundle)

    def locate(self, v) -> Region:
        return next(r for r in self.regions if r.contains(v))


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    low: tuple[Rational, ...]
    high: tuple[Rational, ...]
    revenue_low: Rational
    revenue_high: Rational


class MonotonicityReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    violations: tuple[Violation, ...]
    pairs_checked: int

    @property
    def monotone(self) -> bool:
        return not self.violations
