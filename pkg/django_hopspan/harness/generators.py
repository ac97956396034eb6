"""
Seeded instance generators, one per object family.

Every generator draws from ``numpy.random.default_rng(seed)`` only, so the
same ``(family, n, params, seed)`` always gives the same objects.
"""
import logging
import math
from typing import Callable

import numpy as np

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject

logger = logging.getLogger(__name__)

Generator = Callable[[int, dict, np.random.Generator], list[GeometricObject]]


def _region(n: int, params: dict, dimension: int = 2) -> float:
    return float(params.get("region", max(1.0, n ** (1.0 / dimension))))


def _disks(n, params, rng):
    side = _region(n, params)
    r_min, r_max = params.get("r_min", 0.5), params.get("r_max", 2.0)
    centers = rng.uniform(0.0, side, size=(n, 2))
    radii = rng.uniform(r_min, r_max, size=n)
    return [GeometricObject.disk(x, y, r) for (x, y), r in zip(centers, radii)]


def _balls(n, params, rng):
    d = int(params.get("d", 3))
    side = _region(n, params, d)
    r_min, r_max = params.get("r_min", 0.5), params.get("r_max", 2.0)
    centers = rng.uniform(0.0, side, size=(n, d))
    radii = rng.uniform(r_min, r_max, size=n)
    return [GeometricObject.ball(c, r) for c, r in zip(centers, radii)]


def _boxes(n, params, rng):
    d = int(params.get("d", 3))
    side = _region(n, params, d)
    s_min, s_max = params.get("s_min", 0.5), params.get("s_max", 2.0)
    lo = rng.uniform(0.0, side, size=(n, d))
    extent = rng.uniform(s_min, s_max, size=(n, d))
    return [GeometricObject.box(a, a + e) for a, e in zip(lo, extent)]


def _squares(n, params, rng):
    side = _region(n, params)
    s_min, s_max = params.get("s_min", 0.5), params.get("s_max", 2.0)
    lo = rng.uniform(0.0, side, size=(n, 2))
    sizes = rng.uniform(s_min, s_max, size=n)
    return [GeometricObject.rect(x, y, x + s, y + s) for (x, y), s in zip(lo, sizes)]


def _rects(n, params, rng):
    side = _region(n, params)
    s_min, s_max = params.get("s_min", 0.2), params.get("s_max", 3.0)
    lo = rng.uniform(0.0, side, size=(n, 2))
    extent = rng.uniform(s_min, s_max, size=(n, 2))
    return [GeometricObject.rect(x, y, x + w, y + h) for (x, y), (w, h) in zip(lo, extent)]


def _hv_segments(n, params, rng):
    side = _region(n, params)
    l_min, l_max = params.get("l_min", 0.5), params.get("l_max", 4.0)
    anchors = rng.uniform(0.0, side, size=(n, 2))
    lengths = rng.uniform(l_min, l_max, size=n)
    horizontal = rng.random(n) < 0.5
    objects = []
    for (x, y), length, is_h in zip(anchors, lengths, horizontal):
        if is_h:
            objects.append(GeometricObject.h_segment(x, x + length, y))
        else:
            objects.append(GeometricObject.v_segment(x, y, y + length))
    return objects


def _seg_lines(n, params, rng):
    side = _region(n, params)
    lines = int(params.get("lines", n // 2))
    l_min, l_max = params.get("l_min", 0.5), params.get("l_max", 4.0)
    anchors = rng.uniform(0.0, side, size=(n - lines, 2))
    lengths = rng.uniform(l_min, l_max, size=n - lines)
    xs = rng.uniform(0.0, side, size=lines)
    objects = [GeometricObject.h_segment(x, x + length, y) for (x, y), length in zip(anchors, lengths)]
    objects.extend(GeometricObject.v_line(x) for x in xs)
    return objects


def _polylines(n, params, rng):
    side = _region(n, params)
    vertices = int(params.get("vertices", 4))
    step = float(params.get("step", 1.0))
    starts = rng.uniform(0.0, side, size=(n, 2))
    moves = rng.normal(0.0, step, size=(n, max(0, vertices - 1), 2))
    walks = np.concatenate([starts[:, None, :], starts[:, None, :] + np.cumsum(moves, axis=1)], axis=1)
    return [GeometricObject.polyline(walk) for walk in walks]


def _nested_rects(n, params, rng):
    side = _region(n, params)
    chain = max(1, int(params.get("chain", 5)))
    shrink = float(params.get("shrink", 0.7))
    objects: list[GeometricObject] = []
    while len(objects) < n:
        cx, cy = rng.uniform(0.0, side, size=2)
        w, h = rng.uniform(1.0, 4.0, size=2)
        for _ in range(min(chain, n - len(objects))):
            dx, dy = rng.uniform(-0.05, 0.05, size=2) * (w, h)
            objects.append(GeometricObject.rect(cx + dx - w / 2, cy + dy - h / 2, cx + dx + w / 2, cy + dy + h / 2))
            w, h = w * shrink, h * shrink
    return objects


def _clique_point(n, params, rng):
    r_min, r_max = params.get("r_min", 0.5), params.get("r_max", 2.0)
    radii = rng.uniform(r_min, r_max, size=n)
    angles = rng.uniform(0.0, 2 * math.pi, size=n)
    # Every disk keeps the origin strictly inside
    return [
        GeometricObject.disk(0.9 * r * math.cos(a), 0.9 * r * math.sin(a), r)
        for r, a in zip(radii, angles)
    ]


FAMILIES: dict[str, Generator] = {
    "disks": _disks,
    "balls_d": _balls,
    "boxes_d": _boxes,
    "squares": _squares,
    "rects": _rects,
    "hv_segments": _hv_segments,
    "seg_lines": _seg_lines,
    "polylines": _polylines,
    "nested_rects": _nested_rects,
    "clique_point": _clique_point,
}


def generate_instance(
    family: str, n: int, params: dict | None = None, seed: int | None = None
) -> list[GeometricObject]:
    """
    Generate a reproducible instance.

    Args:
        family: One of :data:`FAMILIES`.
        n: Number of objects.
        params: Family knobs such as ``region``, ``r_min``/``r_max``, ``d``
            or ``vertices``.
        seed: Generator seed; ``DEFAULT_SEED`` when omitted.

    Returns:
        list: ``n`` objects.

    Raises:
        InputError: If the family is unknown or ``n`` is negative.
    """
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}; expected one of {', '.join(sorted(FAMILIES))}")
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    seed = get_conf().DEFAULT_SEED if seed is None else int(seed)
    rng = np.random.default_rng(seed)
    objects = FAMILIES[family](int(n), dict(params or {}), rng) if n else []
    logger.debug(f"generated {len(objects)} {family} objects with seed {seed}")
    return objects
