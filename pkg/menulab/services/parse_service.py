"""Reading and writing the JSON file formats."""
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from menulab.errors import InputError
from menulab.model.distribution_model import JointDistribution, SingleItemDistribution
from menulab.model.menu_model import Menu, bundle_key, bundle_order
from menulab.model.randomized_model import MenuEntry, RandomizedMenu
from menulab.model.search_model import CandidateGrid, GridMode
from menulab.request_model import DistributionFile, GridFile, MenuFile, RandomizedMenuFile
from menulab.services.distribution_service import product
from menulab.utils.rational import fraction_str, parse_rational

logger = logging.getLogger(__name__)

Source = Union[str, bytes]


def _detail(what: str, exc: ValidationError) -> str:
    problems = []
    for error in exc.errors():
        location = '.'.join(str(part) for part in error['loc']) or '<root>'
        message = error['msg'].removeprefix('Value error, ')
        problems.append(f"{location}: {message}")
    return f"invalid {what}: " + '; '.join(problems)


def parse_distribution(text: Source) -> JointDistribution:
    try:
        parsed = DistributionFile.model_validate_json(text)
        if parsed.kind == 'product':
            parts = []
            for i, atoms in enumerate(parsed.marginals):
                try:
                    parts.append(SingleItemDistribution(atoms=atoms))
                except ValidationError as exc:
                    raise InputError(_detail(f"marginal {i + 1}", exc)) from None
            return product(parts)
        atoms = [(atom.values, atom.prob) for atom in parsed.atoms]
        return JointDistribution(n=parsed.items, atoms=atoms)
    except ValidationError as exc:
        raise InputError(_detail('distribution', exc)) from None


def serialize_distribution(dist: JointDistribution) -> str:
    return json.dumps({
        'items': dist.n,
        'kind': 'joint',
        'atoms': [
            {'values': [fraction_str(x) for x in values], 'prob': fraction_str(prob)}
            for values, prob in dist.atoms
        ],
    }, indent=2)


def _bundle_map(n: int, keys, what: str) -> dict[str, int]:
    expected = {bundle_key(b): b for b in bundle_order(n)}
    normalized = {}
    for key in keys:
        try:
            items = sorted(int(part) for part in key.split(','))
        except ValueError:
            raise InputError(f"{what}: bad bundle key {key!r}") from None
        canonical = ','.join(str(i) for i in items)
        if canonical not in expected:
            raise InputError(f"{what}: bundle {key!r} is not a nonempty subset of 1..{n}")
        normalized[key] = expected[canonical]
    missing = set(expected.values()) - set(normalized.values())
    if missing:
        names = ', '.join('{' + bundle_key(b) + '}' for b in sorted(missing))
        raise InputError(f"{what}: no price for bundle(s) {names}")
    return normalized


def parse_menu(text: Source) -> Menu:
    try:
        parsed = MenuFile.model_validate_json(text)
        keys = _bundle_map(parsed.items, parsed.prices, 'menu')
        return Menu.from_map(parsed.items, {keys[k]: v for k, v in parsed.prices.items()})
    except ValidationError as exc:
        raise InputError(_detail('menu', exc)) from None


def menu_json(menu: Menu) -> dict:
    return {
        'items': menu.n,
        'prices': {bundle_key(b): fraction_str(p) for b, p in menu.as_map().items()},
    }


def serialize_menu(menu: Menu) -> str:
    return json.dumps(menu_json(menu), indent=2)


def parse_grid(text: Source) -> CandidateGrid:
    try:
        parsed = GridFile.model_validate_json(text)
        keys = _bundle_map(parsed.items, parsed.prices, 'grid')
        by_bundle = {keys[k]: v for k, v in parsed.prices.items()}
        prices = tuple(
            tuple(sorted({parse_rational(x) for x in by_bundle[b]})) for b in bundle_order(parsed.items))
        return CandidateGrid(n=parsed.items, mode=GridMode.EXPLICIT, prices=prices)
    except ValidationError as exc:
        raise InputError(_detail('grid', exc)) from None
    except ValueError as exc:
        raise InputError(f"invalid grid: {exc}") from None


def parse_randomized_menu(text: Source) -> RandomizedMenu:
    try:
        parsed = RandomizedMenuFile.model_validate_json(text)
        entries = [MenuEntry(allocation=e.alloc, payment=e.pay) for e in parsed.entries]
        return RandomizedMenu(n=parsed.items, entries=entries)
    except ValidationError as exc:
        raise InputError(_detail('randomized menu', exc)) from None


def serialize_randomized_menu(menu: RandomizedMenu) -> str:
    return json.dumps({
        'items': menu.n,
        'entries': [
            {'alloc': [fraction_str(q) for q in e.allocation], 'pay': fraction_str(e.payment)}
            for e in menu.entries
        ],
    }, indent=2)


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
