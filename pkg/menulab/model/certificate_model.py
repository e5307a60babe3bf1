from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, computed_field

from menulab.model.menu_model import Menu
from menulab.utils.rational import Rational


class ConstructionCertificate(BaseModel):
    """Input menu, the candidate menus a construction produced and their revenues."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    construction: str
    input_menu: Menu
    candidates: tuple[Menu, ...]
    chosen: Menu
    branch: str
    swapped: bool = False
    # both sides of the inequality that picked the branch, when one did
    inequality: Optional[tuple[Rational, Rational]] = None
    input_revenue: Rational
    candidate_revenues: tuple[Rational, ...]
    # rev(a,a,c) + rev(b,b,c) == 2 rev(a,b,c), when the branch relies on it
    identity_holds: Optional[bool] = None
    # guaranteed: input_revenue <= factor * chosen_revenue
    factor: Rational = Fraction(1)

    @computed_field
    @property
    def chosen_revenue(self) -> Rational:
        return self.candidate_revenues[self.candidates.index(self.chosen)]

    @computed_field
    @property
    def margin(self) -> Rational:
        return self.chosen_revenue - self.input_revenue

    def holds(self) -> bool:
        return self.input_revenue <= self.factor * self.chosen_revenue
