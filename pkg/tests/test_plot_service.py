from xml.etree import ElementTree as ET

import pytest

from menulab.errors import InputError
from menulab.model.menu_model import Menu
from menulab.services.buyer_service import region_partition_2
from menulab.services.plot_service import SYMBOLS, plot_menu, render_ascii, render_svg
from menulab.utils.data import load_menu

SVG = '{http://www.w3.org/2000/svg}'


def test_supermodular_svg_has_four_regions():
    root = ET.fromstring(render_svg(region_partition_2(load_menu('figure1-supermodular'))))
    bundles = [p.get('data-bundle') for p in root.iter(SVG + 'polygon')]
    assert bundles == ['{}', '{1}', '{2}', '{1,2}']
    markers = {t.text for t in root.iter(SVG + 'text') if t.get('class') == 'marker'}
    assert markers == {'a=15', 'b=45', 'c−a=65', 'c−b=35'}


def test_submodular_svg_title():
    root = ET.fromstring(render_svg(region_partition_2(load_menu('figure1-submodular'))))
    assert root.find(SVG + 'title').text == 'submodular menu (27,70,85)'


def test_ascii_map():
    text = render_ascii(region_partition_2(Menu.of(15, 45, 80)), columns=20, rows=10)
    lines = text.splitlines()
    assert len(lines) == 12
    assert lines[-2] == '+' + '-' * 20
    # bottom-left cell buys nothing, top-right buys the bundle
    assert lines[9][1] == SYMBOLS[0]
    assert lines[0][-1] == SYMBOLS[3]
    assert lines[-1].startswith('supermodular menu (15,45,80)')


def test_plot_writes_file(tmp_path):
    out = tmp_path / 'menu.svg'
    rendered = plot_menu(Menu.of(27, 70, 85), out)
    assert out.read_text() == rendered


def test_plot_needs_two_items():
    with pytest.raises(InputError):
        plot_menu(load_menu('example4'))


def test_unknown_plot_format():
    with pytest.raises(InputError):
        plot_menu(Menu.of(1, 2, 3), fmt='png')
