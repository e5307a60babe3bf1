from pathlib import Path

from menulab import conf
from menulab.errors import InputError
from menulab.model.distribution_model import JointDistribution
from menulab.model.menu_model import Menu
from menulab.model.randomized_model import RandomizedMenu
from menulab.services.parse_service import parse_distribution, parse_menu, parse_randomized_menu, read_text

# bundled instances by name
DISTRIBUTIONS = {
    'example4': 'example4_marginal.json',
    'example5-eps-1/10': 'example5_eps_1_10.json',
    'example5-eps-1/100': 'example5_eps_1_100.json',
    'example6-eps-1/10': 'example6_eps_1_10.json',
    'example6-eps-1/100': 'example6_eps_1_100.json',
    'example7': 'example7_types.json',
}
MENUS = {
    'example4': 'example4_menu.json',
    'example6': 'example6_menu.json',
    'figure1-supermodular': 'figure1_supermodular.json',
    'figure1-submodular': 'figure1_submodular.json',
}
RANDOMIZED_MENUS = {
    'example7': 'example7_menu.json',
}


def data_path(filename: str) -> Path:
    return Path(conf.DATA_DIR) / filename


def _lookup(table: dict, name: str, what: str) -> Path:
    if name not in table:
        known = ', '.join(sorted(table))
        raise InputError(f"no bundled {what} named {name!r} (known: {known})")
    return data_path(table[name])


def load_distribution(name: str) -> JointDistribution:
    return parse_distribution(read_text(_lookup(DISTRIBUTIONS, name, 'distribution')))


def load_menu(name: str) -> Menu:
    return parse_menu(read_text(_lookup(MENUS, name, 'menu')))


def load_randomized_menu(name: str) -> RandomizedMenu:
    return parse_randomized_menu(read_text(_lookup(RANDOMIZED_MENUS, name, 'randomized menu')))


def resolve(path_or_name: str, table: dict) -> str:
    """File contents for a path, or for a bundled instance given as ``@name``."""
    if path_or_name.startswith('@'):
        return read_text(_lookup(table, path_or_name[1:], 'instance'))
    return read_text(path_or_name)
