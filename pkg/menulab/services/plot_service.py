import logging
from fractions import Fraction
from pathlib import Path
from typing import Union
from xml.etree import ElementTree as ET

from menulab.errors import InputError
from menulab.model.menu_model import Menu, bundle_key
from menulab.model.outcome_model import RegionPartition2
from menulab.services.buyer_service import region_partition_2
from menulab.utils.rational import fraction_str

logger = logging.getLogger(__name__)

SIZE = 400
MARGIN = 40
COLORS = {0: '#f2f2f2', 1: '#9ecae1', 2: '#a1d99b', 3: '#fdae6b'}
SYMBOLS = {0: '.', 1: '1', 2: '2', 3: 'B'}


def _label(bundle: int) -> str:
    return '{}' if bundle == 0 else '{' + bundle_key(bundle) + '}'


def _to_pixels(partition: RegionPartition2, point) -> tuple[float, float]:
    scale = SIZE / float(partition.box)
    x, y = point
    return MARGIN + float(x) * scale, MARGIN + SIZE - float(y) * scale


def render_svg(partition: RegionPartition2) -> str:
    """One polygon per region, axis markers at a, c-b (item 1) and b, c-a (item 2)."""
    width = SIZE + 2 * MARGIN
    svg = ET.Element('svg', xmlns='http://www.w3.org/2000/svg', width=str(width), height=str(width),
                     viewBox=f"0 0 {width} {width}")
    title = ET.SubElement(svg, 'title')
    title.text = f"{partition.kind} menu {partition.menu}"

    for region in partition.regions:
        if len(region.vertices) < 3:
            continue
        points = ' '.join('%.2f,%.2f' % _to_pixels(partition, v) for v in region.vertices)
        ET.SubElement(svg, 'polygon', points=points, fill=COLORS[region.bundle], stroke='#333333',
                      **{'stroke-width': '1', 'data-bundle': _label(region.bundle)})
        cx = sum(Fraction(x) for x, _ in region.vertices) / len(region.vertices)
        cy = sum(Fraction(y) for _, y in region.vertices) / len(region.vertices)
        px, py = _to_pixels(partition, (cx, cy))
        text = ET.SubElement(svg, 'text', x='%.2f' % px, y='%.2f' % py, **{'text-anchor': 'middle'})
        text.text = f"{_label(region.bundle)} pays {fraction_str(region.payment)}"

    origin_x, origin_y = _to_pixels(partition, (0, 0))
    ET.SubElement(svg, 'line', x1='%.2f' % origin_x, y1='%.2f' % origin_y, x2=str(MARGIN + SIZE),
                  y2='%.2f' % origin_y, stroke='black')
    ET.SubElement(svg, 'line', x1='%.2f' % origin_x, y1='%.2f' % origin_y, x2='%.2f' % origin_x,
                  y2=str(MARGIN), stroke='black')
    for name, value in partition.markers.items():
        if not 0 <= value <= partition.box:
            continue
        on_first_axis = name in ('a', 'c-b')
        point = (value, 0) if on_first_axis else (0, value)
        px, py = _to_pixels(partition, point)
        ET.SubElement(svg, 'circle', cx='%.2f' % px, cy='%.2f' % py, r='3', fill='black')
        label = ET.SubElement(svg, 'text', x='%.2f' % (px if on_first_axis else px - 8),
                              y='%.2f' % (py + 16 if on_first_axis else py + 4),
                              **{'text-anchor': 'middle' if on_first_axis else 'end', 'class': 'marker'})
        label.text = f"{name.replace('-', '−')}={fraction_str(value)}"
    ET.indent(svg)
    return ET.tostring(svg, encoding='unicode') + '\n'


def render_ascii(partition: RegionPartition2, columns: int = 48, rows: int = 24) -> str:
    """Region map sampled at cell centres, item 2 upwards."""
    step_x = partition.box / columns
    step_y = partition.box / rows
    lines = []
    for r in reversed(range(rows)):
        y = (r + Fraction(1, 2)) * step_y
        lines.append('|' + ''.join(
            SYMBOLS[partition.locate(((c + Fraction(1, 2)) * step_x, y)).bundle] for c in range(columns)))
    lines.append('+' + '-' * columns)
    legend = ', '.join(f"{SYMBOLS[r.bundle]} {_label(r.bundle)}" for r in partition.regions)
    lines.append(f"{partition.kind} menu {partition.menu}; box {fraction_str(partition.box)}; {legend}")
    return '\n'.join(lines) + '\n'


def plot_menu(menu: Menu, out: Union[str, Path, None] = None, fmt: str = 'svg') -> str:
    partition = region_partition_2(menu)
    if fmt == 'svg':
        rendered = render_svg(partition)
    elif fmt == 'ascii':
        rendered = render_ascii(partition)
    else:
        raise InputError(f"unknown plot format {fmt!r}")
    if out is not None:
        try:
            Path(out).write_text(rendered)
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc.strerror}") from None
        logger.info("wrote %s plot of %s to %s", fmt, menu, out)
    return rendered
