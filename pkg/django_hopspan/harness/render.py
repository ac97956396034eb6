"""
Deterministic SVG rendering of a planar instance and its spanner.
"""
import logging
from pathlib import Path
from typing import Sequence

from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject, ObjectKind, bounding_box, representative_point
from django_hopspan.graph import Spanner

logger = logging.getLogger(__name__)

CANVAS = 800
MARGIN = 20
OBJECT_STYLE = 'fill="none" stroke="#1f4e79" stroke-width="1"'
EDGE_STYLE = 'stroke="#c0392b" stroke-width="1" stroke-opacity="0.8"'


class _Viewport:
    """World-to-canvas map with a uniform scale and the y axis pointing up."""

    def __init__(self, objects: Sequence[GeometricObject]):
        xs: list[float] = []
        ys: list[float] = []
        for u in objects:
            lo, hi = bounding_box(u)
            xs.extend((lo[0], hi[0]))
            if u.is_bounded:
                ys.extend((lo[1], hi[1]))
        self.x0, x1 = (min(xs), max(xs)) if xs else (0.0, 1.0)
        self.y0, y1 = (min(ys), max(ys)) if ys else (-1.0, 1.0)
        span = max(x1 - self.x0, y1 - self.y0, 1e-9)
        self.scale = (CANVAS - 2 * MARGIN) / span

    def x(self, value: float) -> str:
        return f"{MARGIN + (value - self.x0) * self.scale:.3f}"

    def y(self, value: float) -> str:
        return f"{CANVAS - MARGIN - (value - self.y0) * self.scale:.3f}"

    def length(self, value: float) -> str:
        return f"{value * self.scale:.3f}"


def _object_lines(u: GeometricObject, view: _Viewport) -> list[str]:
    if u.kind == ObjectKind.DISK:
        cx, cy = u.center
        return [f'  <circle cx="{view.x(cx)}" cy="{view.y(cy)}" r="{view.length(u.radius)}" {OBJECT_STYLE} />']
    if u.kind == ObjectKind.RECT or (u.kind == ObjectKind.BOX and u.dimension == 2):
        (x1, y1), (x2, y2) = u.lo, u.hi
        return [
            f'  <rect x="{view.x(x1)}" y="{view.y(y2)}" width="{view.length(x2 - x1)}" '
            f'height="{view.length(y2 - y1)}" {OBJECT_STYLE} />'
        ]
    if u.kind in (ObjectKind.H_SEGMENT, ObjectKind.V_SEGMENT):
        (x1, y1), (x2, y2) = u.lo, u.hi
        return [f'  <line x1="{view.x(x1)}" y1="{view.y(y1)}" x2="{view.x(x2)}" y2="{view.y(y2)}" {OBJECT_STYLE} />']
    if u.kind == ObjectKind.V_LINE:
        x = view.x(u.lo[0])
        return [f'  <line x1="{x}" y1="0" x2="{x}" y2="{CANVAS}" {OBJECT_STYLE} stroke-dasharray="4 4" />']
    if u.kind == ObjectKind.POLYLINE:
        points = " ".join(f"{view.x(px)},{view.y(py)}" for px, py in u.points)
        return [f'  <polyline points="{points}" {OBJECT_STYLE} />']
    if u.kind == ObjectKind.BALL:
        cx, cy = u.center
        return [f'  <circle cx="{view.x(cx)}" cy="{view.y(cy)}" r="{view.length(u.radius)}" {OBJECT_STYLE} />']
    lines = ["  <g>"]
    for part in u.parts:
        lines.extend("  " + line for line in _object_lines(part, view))
    lines.append("  </g>")
    return lines


def build_svg(objects: Sequence[GeometricObject], spanner: Spanner | None = None) -> str:
    """
    Build the SVG document: object outlines in input order, then spanner edges
    between the objects' representative points.

    Raises:
        InputError: If an object is not planar or an edge names a missing object.
    """
    for u in objects:
        if u.dimension != 2:
            raise InputError(f"only planar instances can be rendered, got d={u.dimension}")
    view = _Viewport(objects)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f"  <!-- {len(objects)} objects, {len(spanner) if spanner else 0} spanner edges -->",
    ]
    for u in objects:
        lines.extend(_object_lines(u, view))

    if spanner is not None:
        anchors = [representative_point(u) for u in objects]
        for a, b in spanner.edges:
            if b >= len(anchors):
                raise InputError(f"spanner edge ({a}, {b}) refers to a missing object")
            (ax, ay), (bx, by) = anchors[a], anchors[b]
            lines.append(
                f'  <line x1="{view.x(ax)}" y1="{view.y(ay)}" x2="{view.x(bx)}" y2="{view.y(by)}" {EDGE_STYLE} />'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(objects: Sequence[GeometricObject], spanner: Spanner | None, path: str | Path) -> None:
    """Write :func:`build_svg` output to ``path``."""
    Path(path).write_text(build_svg(objects, spanner), encoding="utf-8")
    logger.debug(f"rendered {len(objects)} objects to {path}")
