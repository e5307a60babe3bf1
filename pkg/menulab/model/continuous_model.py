from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat


class ERDistribution(BaseModel):
    """Equal revenue distribution: Pr[v >= p] = min(1, r/p)."""

    model_config = ConfigDict(frozen=True)

    r: PositiveFloat

    def tail(self, p: float) -> float:
        return 1.0 if p <= self.r else self.r / p


class NumericParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    cap: PositiveFloat = 1e4
    grid_points: int = Field(default=2000, ge=100)
    tolerance: PositiveFloat = 1e-12
    # support values are rounded to multiples of 1/resolution
    resolution: int = Field(default=10_000, ge=1)
    # coarse discretization used for the deterministic menu search
    search_points: int = Field(default=12, ge=2)
    search_cap: PositiveFloat = 20.0
    # allowed |drev - brev| on the coarse discretization, relative to srev
    gap_tolerance: PositiveFloat = 1e-9
    # coarser still, for the randomized LP; 0 skips it
    lp_points: int = Field(default=0, ge=0)


class ERGapReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    r1: float
    r2: float
    cap: float
    grid_points: int
    srev: float
    brev: float
    brev_price: float
    drev: float
    brev_coarse: float
    drev_gap: float
    tolerance: float
    within_tolerance: bool
    brev_ratio: float
    drev_ratio: float
    w: float
    rev_lp: Optional[float] = None
