"""
3-hop spanners for axis-parallel segments and axis-aligned rectangles.

Horizontal segments against vertical lines are handled by a greedy interval
cover of the x-axis. Full segment sets split the horizontal segments by
median y and hand the vertical segments spanning a whole slab to the line
construction. Rectangles are reduced to their four sides plus a range-tree
cover of the corner containments.
"""
import bisect
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject, ObjectKind
from django_hopspan.graph import Edge, Spanner, normalize_edge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverInterval:
    """``{left}`` when ``covering`` is None, else ``(left, right]``."""

    left: float
    right: float
    covering: int | None

    def contains(self, x: float) -> bool:
        if self.covering is None:
            return x == self.left
        return self.left < x <= self.right


@dataclass
class IntervalCover:
    """
    Greedy cover of the x-axis by covering segments.

    ``intervals`` holds one or more runs; every run starts with a singleton
    interval at its leftmost endpoint.
    """

    intervals: list[CoverInterval] = field(default_factory=list)

    @property
    def runs(self) -> int:
        return sum(1 for iv in self.intervals if iv.covering is None)

    def locate(self, x: float) -> int | None:
        """Index of the interval containing ``x``."""
        rights = [iv.right for iv in self.intervals]
        i = bisect.bisect_left(rights, x)
        while i < len(self.intervals):
            if self.intervals[i].contains(x):
                return i
            if self.intervals[i].left > x:
                return None
            i += 1
        return None


def _extents(segments: Sequence) -> list[tuple[float, float]]:
    extents = []
    for s in segments:
        if isinstance(s, GeometricObject):
            if s.kind != ObjectKind.H_SEGMENT:
                raise InputError(f"cover_intervals takes horizontal segments, got {s.kind.value}")
            extents.append((float(s.lo[0]), float(s.hi[0])))
        else:
            a, b = s
            extents.append((float(a), float(b)))
    return extents


def cover_intervals(segments: Sequence[GeometricObject | tuple[float, float]]) -> IntervalCover:
    """
    Build the greedy interval cover of horizontal extents.

    ``I_0`` is the leftmost endpoint; each further interval ends at the
    largest right endpoint among segments starting at or before the previous
    one, ties going to the lowest index. When no segment reaches past the
    current end, a new run starts at the next left endpoint.

    Args:
        segments: Horizontal segments, or their bare ``(x1, x2)`` extents since
            the height plays no part in the cover; indexed by position.

    Returns:
        IntervalCover: The intervals with their covering segment indices.
    """
    extents = _extents(segments)
    if not extents:
        raise InputError("cover_intervals needs at least one segment")
    order = sorted(range(len(extents)), key=lambda i: (extents[i][0], i))
    cover = IntervalCover()
    pos = 0
    while pos < len(order):
        x = extents[order[pos]][0]
        cover.intervals.append(CoverInterval(x, x, None))
        best: tuple[float, int] | None = None
        while True:
            while pos < len(order) and extents[order[pos]][0] <= x:
                i = order[pos]
                if best is None or extents[i][1] > best[0] or (extents[i][1] == best[0] and i < best[1]):
                    best = (extents[i][1], i)
                pos += 1
            if best is None or best[0] <= x:
                break
            cover.intervals.append(CoverInterval(x, best[0], best[1]))
            x = best[0]
    return cover


def _seg_line_edges(
    horizontals: Sequence[tuple[int, float, float]],
    lines: Sequence[tuple[int, float]],
) -> set[Edge]:
    """
    Edges for horizontal segments ``(id, x1, x2)`` against vertical lines
    ``(id, x)``; every segment is assumed to reach the height of every line.
    """
    if not horizontals or not lines:
        return set()
    line_list = sorted(lines, key=lambda item: (item[1], item[0]))
    xs = [x for _, x in line_list]
    cover = cover_intervals([(x1, x2) for _, x1, x2 in horizontals])
    edges: set[Edge] = set()

    for iv in cover.intervals:
        if iv.covering is None:
            continue
        owner = horizontals[iv.covering][0]
        start = bisect.bisect_right(xs, iv.left)
        stop = bisect.bisect_right(xs, iv.right)
        edges.update(normalize_edge(owner, line_list[j][0]) for j in range(start, stop))

    # Lines at a run's first x belong to the run's first real interval
    for pos, iv in enumerate(cover.intervals):
        if iv.covering is None and pos + 1 < len(cover.intervals):
            nxt = cover.intervals[pos + 1]
            if nxt.covering is None:
                continue
            owner = horizontals[nxt.covering][0]
            start = bisect.bisect_left(xs, iv.left)
            stop = bisect.bisect_right(xs, iv.left)
            edges.update(normalize_edge(owner, line_list[j][0]) for j in range(start, stop))

    for sid, x1, x2 in horizontals:
        start = bisect.bisect_left(xs, x1)
        stop = bisect.bisect_right(xs, x2)
        if start < stop:
            edges.add(normalize_edge(sid, line_list[start][0]))
            edges.add(normalize_edge(sid, line_list[stop - 1][0]))
    return edges


def _overlap_edges(groups: dict[float, list[tuple[int, float, float]]]) -> set[Edge]:
    """One direct edge per overlapping pair of collinear extents."""
    edges: set[Edge] = set()
    for items in groups.values():
        items = sorted(items, key=lambda item: (item[1], item[0]))
        active: list[tuple[int, float]] = []
        for sid, a, b in items:
            active = [(other, end) for other, end in active if end >= a]
            edges.update(normalize_edge(sid, other) for other, _ in active)
            active.append((sid, b))
    return edges


def _split_kinds(objects: Sequence[GeometricObject], allowed: set[ObjectKind]):
    horizontals, verticals = [], []
    for i, u in enumerate(objects):
        if u.kind not in allowed:
            raise InputError(f"{u.kind.value} objects are not accepted here")
        if u.kind == ObjectKind.H_SEGMENT:
            horizontals.append((i, u.lo[0], u.hi[0], u.lo[1]))
        else:
            verticals.append((i, u.lo[0], u.lo[1], u.hi[1]))
    return horizontals, verticals


def _same_axis_edges(horizontals, verticals) -> set[Edge]:
    by_y: dict[float, list] = {}
    for sid, x1, x2, y in horizontals:
        by_y.setdefault(y, []).append((sid, x1, x2))
    by_x: dict[float, list] = {}
    for sid, x, y1, y2 in verticals:
        by_x.setdefault(x, []).append((sid, y1, y2))
    return _overlap_edges(by_y) | _overlap_edges(by_x)


def seg_line_spanner(objects: Sequence[GeometricObject]) -> Spanner:
    """
    3-hop spanner of ``O(n)`` size for horizontal segments and vertical lines.

    Every covering segment keeps its intersections inside its own interval;
    every segment keeps its leftmost and rightmost line.

    Args:
        objects: ``h_segment`` and ``v_line`` objects in one list, in any order;
            spanner vertices follow input order, so ``H`` and ``L`` are not
            passed separately.

    Returns:
        Spanner: Tagged ``seg-line``.
    """
    horizontals, verticals = _split_kinds(objects, {ObjectKind.H_SEGMENT, ObjectKind.V_LINE})
    edges = _seg_line_edges(
        [(sid, x1, x2) for sid, x1, x2, _ in horizontals],
        [(sid, x) for sid, x, _, _ in verticals],
    )
    edges |= _same_axis_edges(horizontals, verticals)
    return Spanner(len(objects), sorted(edges), 3, "seg-line", {})


def _segment_edges(horizontals, verticals) -> set[Edge]:
    """Slab recursion over horizontals ``(id, x1, x2, y)`` and verticals ``(id, x, y1, y2)``."""
    edges: set[Edge] = set()
    stack = [(sorted(horizontals, key=lambda h: (h[3], h[0])), list(verticals))]
    while stack:
        slab, candidates = stack.pop()
        if not slab or not candidates:
            continue
        bottom, top = slab[0][3], slab[-1][3]
        spanning = [v for v in candidates if v[2] <= bottom and v[3] >= top]
        rest = [v for v in candidates if not (v[2] <= bottom and v[3] >= top)]
        edges |= _seg_line_edges(
            [(sid, x1, x2) for sid, x1, x2, _ in slab], [(sid, x) for sid, x, _, _ in spanning]
        )
        if len(slab) == 1:
            # A single height: every vertical meeting it spans the slab
            continue
        mid = len(slab) // 2
        for half in (slab[:mid], slab[mid:]):
            lo, hi = half[0][3], half[-1][3]
            stack.append((half, [v for v in rest if v[2] <= hi and v[3] >= lo]))
    return edges


def seg_spanner(objects: Sequence[GeometricObject]) -> Spanner:
    """
    3-hop spanner of ``O(n log n)`` size for horizontal and vertical segments.

    Args:
        objects: ``h_segment`` and ``v_segment`` objects in one list, in any
            order; spanner vertices follow input order.

    Returns:
        Spanner: Tagged ``seg``.
    """
    horizontals, verticals = _split_kinds(objects, {ObjectKind.H_SEGMENT, ObjectKind.V_SEGMENT})
    edges = _segment_edges(horizontals, verticals)
    edges |= _same_axis_edges(horizontals, verticals)
    return Spanner(len(objects), sorted(edges), 3, "seg", {})


def _rect_bounds(objects: Sequence[GeometricObject]) -> list[tuple[float, float, float, float]]:
    bounds = []
    for u in objects:
        if u.kind not in (ObjectKind.RECT, ObjectKind.BOX) or u.dimension != 2:
            raise InputError(f"rect_spanner takes planar rectangles, got {u.kind.value}")
        bounds.append((u.lo[0], u.lo[1], u.hi[0], u.hi[1]))
    return bounds


def _dyadic_blocks(lo: int, hi: int) -> Iterable[tuple[int, int]]:
    """Canonical aligned blocks ``(level, j)`` covering positions ``[lo, hi)``."""
    level = 0
    while lo < hi:
        if lo & 1:
            yield level, lo
            lo += 1
        if hi & 1:
            hi -= 1
            yield level, hi
        lo >>= 1
        hi >>= 1
        level += 1


class _CornerIndex:
    """Two-level range tree over rectangle corners, queried by rectangles."""

    def __init__(self, corners: list[tuple[float, float, int]]):
        self.corners = sorted(corners)
        self.xs = [c[0] for c in self.corners]
        self._columns: dict[tuple[int, int], tuple[list[float], list[int]]] = {}

    def column(self, level: int, j: int) -> tuple[list[float], list[int]]:
        """Corners of x-block ``(level, j)`` as sorted y values and their owners."""
        key = (level, j)
        if key not in self._columns:
            block = self.corners[j << level : (j + 1) << level]
            ordered = sorted((y, owner) for _, y, owner in block)
            self._columns[key] = ([y for y, _ in ordered], [owner for _, owner in ordered])
        return self._columns[key]

    def query(self, x1: float, y1: float, x2: float, y2: float) -> Iterable[tuple]:
        lo = bisect.bisect_left(self.xs, x1)
        hi = bisect.bisect_right(self.xs, x2)
        for level, j in _dyadic_blocks(lo, hi):
            ys, _ = self.column(level, j)
            a = bisect.bisect_left(ys, y1)
            b = bisect.bisect_right(ys, y2)
            for level2, j2 in _dyadic_blocks(a, b):
                yield level, j, level2, j2

    def owners(self, key: tuple) -> set[int]:
        level, j, level2, j2 = key
        _, owners = self.column(level, j)
        return set(owners[j2 << level2 : (j2 + 1) << level2])


def _corner_edges(bounds: list[tuple[float, float, float, float]]) -> tuple[set[Edge], int]:
    """
    Cover every (rectangle, corner of another rectangle inside it) pair by
    bicliques of a range tree; each biclique gets two stars so the pair is
    joined within 3 hops.
    """
    corners = []
    for i, (x1, y1, x2, y2) in enumerate(bounds):
        corners.extend({(x1, y1, i), (x1, y2, i), (x2, y1, i), (x2, y2, i)})
    index = _CornerIndex(corners)
    queries: dict[tuple, list[int]] = {}
    for i, box in enumerate(bounds):
        for key in index.query(*box):
            queries.setdefault(key, []).append(i)

    edges: set[Edge] = set()
    bicliques = 0
    for key, askers in queries.items():
        owners = index.owners(key)
        if len(owners | set(askers)) < 2:
            continue
        bicliques += 1
        a0 = askers[0]
        b0 = min(owners)
        edges.update(normalize_edge(a0, o) for o in owners if o != a0)
        edges.update(normalize_edge(b0, q) for q in askers if q != b0)
    return edges, bicliques


def rect_spanner(objects: Sequence[GeometricObject]) -> Spanner:
    """
    3-hop spanner for axis-aligned rectangles.

    Side intersections go through :func:`seg_spanner` on the ``4n`` sides;
    containments are covered through the corners they contain.

    Args:
        objects: ``axis_rect`` (or planar ``box_d``) objects.

    Returns:
        Spanner: Tagged ``rect``.
    """
    bounds = _rect_bounds(objects)
    horizontals, verticals = [], []
    for i, (x1, y1, x2, y2) in enumerate(bounds):
        horizontals.append((4 * i, x1, x2, y1))
        horizontals.append((4 * i + 1, x1, x2, y2))
        verticals.append((4 * i + 2, x1, y1, y2))
        verticals.append((4 * i + 3, x2, y1, y2))

    side_edges = _segment_edges(horizontals, verticals) | _same_axis_edges(horizontals, verticals)
    edges = {normalize_edge(a // 4, b // 4) for a, b in side_edges if a // 4 != b // 4}
    corner, bicliques = _corner_edges(bounds)
    edges |= corner
    params = {"side_edges": len(side_edges), "corner_edges": len(corner), "bicliques": bicliques}
    logger.debug(f"rect: n={len(bounds)} spanner={len(edges)} bicliques={bicliques}")
    return Spanner(len(bounds), sorted(edges), 3, "rect", params)
