"""
Geometric objects, closed-set intersection predicates and the small amount of
affine plumbing (translation, rescaling) shared by every construction.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from django_hopspan.exceptions import InputError, StructuralViolation

logger = logging.getLogger(__name__)

Point = tuple[float, ...]


class ObjectKind(str, Enum):
    """Object kinds understood by the predicates and the instance format."""

    DISK = "disk"
    BALL = "ball_d"
    BOX = "box_d"
    RECT = "axis_rect"
    H_SEGMENT = "h_segment"
    V_SEGMENT = "v_segment"
    V_LINE = "v_line"
    POLYLINE = "polyline"
    UNION = "union_object"


ROUND_KINDS = frozenset({ObjectKind.DISK, ObjectKind.BALL})
BOX_KINDS = frozenset(
    {ObjectKind.BOX, ObjectKind.RECT, ObjectKind.H_SEGMENT, ObjectKind.V_SEGMENT, ObjectKind.V_LINE}
)
PLANAR_KINDS = frozenset(
    {
        ObjectKind.DISK,
        ObjectKind.RECT,
        ObjectKind.H_SEGMENT,
        ObjectKind.V_SEGMENT,
        ObjectKind.V_LINE,
        ObjectKind.POLYLINE,
    }
)
# Share of the extent left free on each side by rescale_to_unit
RESCALE_MARGIN = 2.0**-30


@dataclass(frozen=True)
class GeometricObject:
    """
    A closed geometric object.

    Round kinds use ``center``/``radius``, box kinds use ``lo``/``hi`` (a
    vertical line stores infinite y bounds), polylines use ``points`` and
    union objects carry their resolved ``parts`` plus the ``members``
    indices they were built from.
    """

    kind: ObjectKind
    dimension: int
    center: Point = ()
    radius: float = 0.0
    lo: Point = ()
    hi: Point = ()
    points: tuple[Point, ...] = ()
    members: tuple[int, ...] = ()
    parts: tuple["GeometricObject", ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError(f"dimension must be positive, got {self.dimension}")
        if self.kind in PLANAR_KINDS and self.dimension != 2:
            raise InputError(f"{self.kind.value} objects live in the plane, got d={self.dimension}")

        if self.kind in ROUND_KINDS:
            _require_finite(self.center, self.kind)
            if len(self.center) != self.dimension:
                raise InputError("center does not match dimension")
            if not (math.isfinite(self.radius) and self.radius > 0):
                raise InputError(f"radius must be finite and positive, got {self.radius}")
        elif self.kind in BOX_KINDS:
            if len(self.lo) != self.dimension or len(self.hi) != self.dimension:
                raise InputError("box bounds do not match dimension")
            if self.kind == ObjectKind.V_LINE:
                _require_finite(self.lo[:1], self.kind)
            else:
                _require_finite(self.lo + self.hi, self.kind)
            if any(a > b for a, b in zip(self.lo, self.hi)):
                raise InputError(f"lo must not exceed hi per axis: {self.lo} / {self.hi}")
        elif self.kind == ObjectKind.POLYLINE:
            if not self.points:
                raise InputError("polyline needs at least one vertex")
            for p in self.points:
                if len(p) != 2:
                    raise InputError("polyline vertices must be 2D")
                _require_finite(p, self.kind)
        elif self.kind == ObjectKind.UNION:
            if not self.parts:
                raise InputError("union_object needs at least one member")
            if any(part.dimension != self.dimension for part in self.parts):
                raise InputError("union_object members must share its dimension")

    # Constructors -----------------------------------------------------------

    @classmethod
    def disk(cls, x: float, y: float, r: float) -> "GeometricObject":
        return cls(ObjectKind.DISK, 2, center=(float(x), float(y)), radius=float(r))

    @classmethod
    def ball(cls, center: Sequence[float], r: float) -> "GeometricObject":
        center = tuple(float(c) for c in center)
        return cls(ObjectKind.BALL, len(center), center=center, radius=float(r))

    @classmethod
    def box(cls, lo: Sequence[float], hi: Sequence[float]) -> "GeometricObject":
        lo = tuple(float(c) for c in lo)
        hi = tuple(float(c) for c in hi)
        return cls(ObjectKind.BOX, len(lo), lo=lo, hi=hi)

    @classmethod
    def rect(cls, x1: float, y1: float, x2: float, y2: float) -> "GeometricObject":
        return cls(ObjectKind.RECT, 2, lo=(float(x1), float(y1)), hi=(float(x2), float(y2)))

    @classmethod
    def h_segment(cls, x1: float, x2: float, y: float) -> "GeometricObject":
        return cls(ObjectKind.H_SEGMENT, 2, lo=(float(x1), float(y)), hi=(float(x2), float(y)))

    @classmethod
    def v_segment(cls, x: float, y1: float, y2: float) -> "GeometricObject":
        return cls(ObjectKind.V_SEGMENT, 2, lo=(float(x), float(y1)), hi=(float(x), float(y2)))

    @classmethod
    def v_line(cls, x: float) -> "GeometricObject":
        return cls(ObjectKind.V_LINE, 2, lo=(float(x), -math.inf), hi=(float(x), math.inf))

    @classmethod
    def polyline(cls, points: Iterable[Sequence[float]]) -> "GeometricObject":
        pts = tuple((float(p[0]), float(p[1])) for p in points)
        return cls(ObjectKind.POLYLINE, 2, points=pts)

    @classmethod
    def union(
        cls, parts: Sequence["GeometricObject"], members: Sequence[int] = ()
    ) -> "GeometricObject":
        parts = tuple(parts)
        if not parts:
            raise InputError("union_object needs at least one member")
        return cls(
            ObjectKind.UNION,
            parts[0].dimension,
            members=tuple(int(m) for m in members),
            parts=parts,
        )

    @property
    def is_bounded(self) -> bool:
        if self.kind == ObjectKind.V_LINE:
            return False
        if self.kind == ObjectKind.UNION:
            return all(part.is_bounded for part in self.parts)
        return True


def _require_finite(values: Iterable[float], kind: ObjectKind) -> None:
    if not all(math.isfinite(v) for v in values):
        raise InputError(f"{kind.value} coordinates must be finite")


def _check_dimensions(a: GeometricObject, b: GeometricObject) -> None:
    if a.dimension != b.dimension:
        raise InputError(f"dimension mismatch: {a.dimension} vs {b.dimension}")


# Bounding boxes and measures ------------------------------------------------


def bounding_box(u: GeometricObject) -> tuple[Point, Point]:
    """
    Closed axis-aligned bounding box of an object.

    Args:
        u: The object.

    Returns:
        tuple: ``(lo, hi)`` corner points; a vertical line has infinite y bounds.
    """
    if u.kind in ROUND_KINDS:
        return (
            tuple(c - u.radius for c in u.center),
            tuple(c + u.radius for c in u.center),
        )
    if u.kind in BOX_KINDS:
        return u.lo, u.hi
    if u.kind == ObjectKind.POLYLINE:
        xs = [p[0] for p in u.points]
        ys = [p[1] for p in u.points]
        return (min(xs), min(ys)), (max(xs), max(ys))
    boxes = [bounding_box(part) for part in u.parts]
    lo = tuple(min(b[0][i] for b in boxes) for i in range(u.dimension))
    hi = tuple(max(b[1][i] for b in boxes) for i in range(u.dimension))
    return lo, hi


def side_length(u: GeometricObject) -> float:
    """
    Edge length of the smallest axis-aligned hypercube containing ``u``.

    Raises:
        InputError: If the object is unbounded.
    """
    if not u.is_bounded:
        raise InputError(f"{u.kind.value} is unbounded and has no side length")
    lo, hi = bounding_box(u)
    return max(b - a for a, b in zip(lo, hi))


def leftmost_point(u: GeometricObject) -> Point:
    """
    Lexicographically smallest point of ``u`` (coordinate 1, then 2, ...).

    Raises:
        InputError: If the object is unbounded.
    """
    if u.kind in ROUND_KINDS:
        return (u.center[0] - u.radius,) + u.center[1:]
    if u.kind == ObjectKind.V_LINE:
        raise InputError("a vertical line has no leftmost point")
    if u.kind in BOX_KINDS:
        return u.lo
    if u.kind == ObjectKind.POLYLINE:
        return min(u.points)
    return min(leftmost_point(part) for part in u.parts)


def representative_point(u: GeometricObject) -> Point:
    """A point of ``u`` near its middle; used to draw and to seed fallbacks."""
    if u.kind in ROUND_KINDS:
        return u.center
    if u.kind == ObjectKind.V_LINE:
        return (u.lo[0], 0.0)
    if u.kind in BOX_KINDS:
        return tuple((a + b) / 2.0 for a, b in zip(u.lo, u.hi))
    if u.kind == ObjectKind.POLYLINE:
        return u.points[len(u.points) // 2]
    return representative_point(u.parts[0])


# Point containment ----------------------------------------------------------


def contains_point(u: GeometricObject, p: Sequence[float]) -> bool:
    """Closed containment test of a single point."""
    if len(p) != u.dimension:
        raise InputError(f"point of dimension {len(p)} tested against d={u.dimension}")
    if u.kind in ROUND_KINDS:
        return sum((a - b) ** 2 for a, b in zip(p, u.center)) <= u.radius * u.radius
    if u.kind in BOX_KINDS:
        return all(lo <= x <= hi for x, lo, hi in zip(p, u.lo, u.hi))
    if u.kind == ObjectKind.POLYLINE:
        q = (float(p[0]), float(p[1]))
        return any(_on_segment(a, b, q) for a, b in _segments(u))
    return any(contains_point(part, p) for part in u.parts)


def contains_points(u: GeometricObject, points: np.ndarray) -> np.ndarray:
    """
    Vectorised closed containment of many points.

    Args:
        u: The object.
        points: Array of shape ``(m, d)``.

    Returns:
        np.ndarray: Boolean mask of shape ``(m,)``.
    """
    if points.size == 0:
        return np.zeros(len(points), dtype=bool)
    if u.kind in ROUND_KINDS:
        diff = points - np.asarray(u.center)
        return np.einsum("ij,ij->i", diff, diff) <= u.radius * u.radius
    if u.kind in BOX_KINDS:
        return np.all((points >= np.asarray(u.lo)) & (points <= np.asarray(u.hi)), axis=1)
    if u.kind == ObjectKind.POLYLINE:
        mask = np.zeros(len(points), dtype=bool)
        for a, b in _segments(u):
            ax, ay = a
            bx, by = b
            cross = (bx - ax) * (points[:, 1] - ay) - (by - ay) * (points[:, 0] - ax)
            inside = (
                (points[:, 0] >= min(ax, bx))
                & (points[:, 0] <= max(ax, bx))
                & (points[:, 1] >= min(ay, by))
                & (points[:, 1] <= max(ay, by))
            )
            mask |= (cross == 0) & inside
        return mask
    mask = np.zeros(len(points), dtype=bool)
    for part in u.parts:
        mask |= contains_points(part, points)
    return mask


def depth(p: Sequence[float], objects: Sequence[GeometricObject]) -> int:
    """Number of objects that contain ``p`` (closed sets)."""
    return sum(1 for u in objects if contains_point(u, p))


# Intersection predicates ----------------------------------------------------


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _on_segment(a: Point, b: Point, q: Point) -> bool:
    if _orient(a, b, q) != 0:
        return False
    return min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1])


def _segments(u: GeometricObject) -> list[tuple[Point, Point]]:
    pts = u.points
    if len(pts) == 1:
        return [(pts[0], pts[0])]
    return list(zip(pts[:-1], pts[1:]))


def segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed segment intersection via orientation signs (handles collinear overlap)."""
    o1 = _sign(_orient(p1, p2, q1))
    o2 = _sign(_orient(p1, p2, q2))
    o3 = _sign(_orient(q1, q2, p1))
    o4 = _sign(_orient(q1, q2, p2))
    if o1 != o2 and o3 != o4 and o1 * o2 <= 0 and o3 * o4 <= 0:
        if o1 != 0 or o2 != 0 or o3 != 0 or o4 != 0:
            return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False


def _boxes_overlap(alo: Point, ahi: Point, blo: Point, bhi: Point) -> bool:
    return all(a0 <= b1 and b0 <= a1 for a0, a1, b0, b1 in zip(alo, ahi, blo, bhi))


def _ball_box_distance2(center: Point, lo: Point, hi: Point) -> float:
    total = 0.0
    for c, a, b in zip(center, lo, hi):
        if c < a:
            total += (a - c) ** 2
        elif c > b:
            total += (c - b) ** 2
    return total


def _segment_box(p: Point, q: Point, lo: Point, hi: Point) -> bool:
    slo = (min(p[0], q[0]), min(p[1], q[1]))
    shi = (max(p[0], q[0]), max(p[1], q[1]))
    if not _boxes_overlap(slo, shi, lo, hi):
        return False
    # Clip the box to the segment's bounding box so infinite bounds vanish
    clo = (max(lo[0], slo[0]), max(lo[1], slo[1]))
    chi = (min(hi[0], shi[0]), min(hi[1], shi[1]))
    corners = [(clo[0], clo[1]), (chi[0], clo[1]), (chi[0], chi[1]), (clo[0], chi[1])]
    signs = {_sign(_orient(p, q, c)) for c in corners}
    return not (signs == {1} or signs == {-1})


def _segment_ball(p: Point, q: Point, center: Point, r: float) -> bool:
    dx, dy = q[0] - p[0], q[1] - p[1]
    wx, wy = center[0] - p[0], center[1] - p[1]
    dd = dx * dx + dy * dy
    if dd == 0:
        return wx * wx + wy * wy <= r * r
    t = min(1.0, max(0.0, (wx * dx + wy * dy) / dd))
    cx, cy = p[0] + t * dx - center[0], p[1] + t * dy - center[1]
    return cx * cx + cy * cy <= r * r


def intersects(a: GeometricObject, b: GeometricObject) -> bool:
    """
    Closed-set intersection test: true iff ``a`` and ``b`` share a point.

    Touching counts. A union object intersects ``b`` iff one of its members
    does. Disks and balls compare squared distances, boxes and segments use
    sign tests only.

    Args:
        a: First object.
        b: Second object.

    Returns:
        bool: Whether the objects intersect.

    Raises:
        InputError: On dimension mismatch.
    """
    _check_dimensions(a, b)
    if a.kind == ObjectKind.UNION:
        return any(intersects(part, b) for part in a.parts)
    if b.kind == ObjectKind.UNION:
        return any(intersects(a, part) for part in b.parts)

    alo, ahi = bounding_box(a)
    blo, bhi = bounding_box(b)
    if not _boxes_overlap(alo, ahi, blo, bhi):
        return False

    if a.kind in BOX_KINDS and b.kind in BOX_KINDS:
        return True
    if a.kind in ROUND_KINDS and b.kind in ROUND_KINDS:
        reach = a.radius + b.radius
        return sum((x - y) ** 2 for x, y in zip(a.center, b.center)) <= reach * reach
    if a.kind in ROUND_KINDS and b.kind in BOX_KINDS:
        return _ball_box_distance2(a.center, b.lo, b.hi) <= a.radius * a.radius
    if a.kind in BOX_KINDS and b.kind in ROUND_KINDS:
        return _ball_box_distance2(b.center, a.lo, a.hi) <= b.radius * b.radius

    # At least one polyline from here on
    if a.kind != ObjectKind.POLYLINE:
        a, b = b, a
    segs = _segments(a)
    if b.kind == ObjectKind.POLYLINE:
        return any(segments_intersect(p, q, s, t) for p, q in segs for s, t in _segments(b))
    if b.kind in BOX_KINDS:
        return any(_segment_box(p, q, b.lo, b.hi) for p, q in segs)
    return any(_segment_ball(p, q, b.center, b.radius) for p, q in segs)


def object_meets_box(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    """Whether ``u`` intersects the closed box ``[lo, hi]``."""
    lo, hi = tuple(lo), tuple(hi)
    if u.kind == ObjectKind.UNION:
        return any(object_meets_box(part, lo, hi) for part in u.parts)
    ulo, uhi = bounding_box(u)
    if not _boxes_overlap(ulo, uhi, lo, hi):
        return False
    if u.kind in BOX_KINDS:
        return True
    if u.kind in ROUND_KINDS:
        return _ball_box_distance2(u.center, lo, hi) <= u.radius * u.radius
    return any(_segment_box(p, q, lo, hi) for p, q in _segments(u))


def object_inside_box(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    """Whether ``u`` lies inside the half-open box ``[lo, hi)``."""
    ulo, uhi = bounding_box(u)
    return all(a >= l and b < h for a, b, l, h in zip(ulo, uhi, lo, hi))


def object_contains_box(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    """Whether the closed box ``[lo, hi]`` lies inside ``u``."""
    if u.kind in ROUND_KINDS:
        far = sum(max(abs(c - a), abs(c - b)) ** 2 for c, a, b in zip(u.center, lo, hi))
        return far <= u.radius * u.radius
    if u.kind in BOX_KINDS:
        return all(ul <= l and h <= uh for ul, uh, l, h in zip(u.lo, u.hi, lo, hi))
    if u.kind == ObjectKind.UNION:
        return any(object_contains_box(part, lo, hi) for part in u.parts)
    # A polyline only contains degenerate boxes
    if all(a == b for a, b in zip(lo, hi)):
        return contains_point(u, tuple(lo))
    return False


# Affine maps ----------------------------------------------------------------


def _map_object(
    u: GeometricObject, point_fn: Callable[[Point], Point], scale: float
) -> GeometricObject:
    if u.kind in ROUND_KINDS:
        return replace(u, center=point_fn(u.center), radius=u.radius * scale)
    if u.kind == ObjectKind.V_LINE:
        x = point_fn((u.lo[0], 0.0))[0]
        return replace(u, lo=(x, -math.inf), hi=(x, math.inf))
    if u.kind in BOX_KINDS:
        return replace(u, lo=point_fn(u.lo), hi=point_fn(u.hi))
    if u.kind == ObjectKind.POLYLINE:
        return replace(u, points=tuple(point_fn(p) for p in u.points))
    return replace(u, parts=tuple(_map_object(part, point_fn, scale) for part in u.parts))


def translate(u: GeometricObject, vector: Sequence[float]) -> GeometricObject:
    """Translate ``u`` by ``vector``."""
    vector = tuple(vector)
    return _map_object(u, lambda p: tuple(a + b for a, b in zip(p, vector)), 1.0)


@dataclass(frozen=True)
class AffineMap:
    """Uniform scaling map ``p -> (p - offset) * scale``."""

    offset: Point
    scale: float

    def apply(self, u: GeometricObject) -> GeometricObject:
        return _map_object(
            u, lambda p: tuple((a - o) * self.scale for a, o in zip(p, self.offset)), self.scale
        )

    def to_original(self, p: Sequence[float]) -> Point:
        return tuple(a / self.scale + o for a, o in zip(p, self.offset))

    def as_dict(self) -> dict:
        return {"offset": list(self.offset), "scale": self.scale}


def rescale_to_unit(objects: Sequence[GeometricObject]) -> tuple[list[GeometricObject], AffineMap]:
    """
    Map bounded objects into ``[0, 1)^d`` with one uniform scaling.

    Args:
        objects: Non-empty collection of bounded objects of one dimension.

    Returns:
        tuple: The mapped objects and the map, so outputs can be reported in
        original coordinates.
    """
    if not objects:
        return [], AffineMap(offset=(), scale=1.0)
    d = objects[0].dimension
    boxes = [bounding_box(u) for u in objects if u.is_bounded]
    if len(boxes) != len(objects):
        raise InputError("cannot rescale unbounded objects")
    lo = tuple(min(b[0][i] for b in boxes) for i in range(d))
    hi = tuple(max(b[1][i] for b in boxes) for i in range(d))
    extent = max(b - a for a, b in zip(lo, hi))
    if extent == 0:
        affine = AffineMap(offset=lo, scale=1.0)
    else:
        # Room on both sides for the rounding of (c - offset) * scale
        magnitude = max(abs(x) for x in lo + hi)
        margin = max(extent * RESCALE_MARGIN, magnitude * 2.0**-40)
        scale = 1.0 / ((extent + 2 * margin) * (1.0 + 2.0**-20))
        if math.isfinite(scale):
            affine = AffineMap(offset=tuple(a - margin for a in lo), scale=scale)
        else:
            affine = AffineMap(offset=lo, scale=1.0)
    mapped = [affine.apply(u) for u in objects]
    for u in mapped:
        box_lo, box_hi = bounding_box(u)
        if min(box_lo) < 0.0 or max(box_hi) >= 1.0:
            raise StructuralViolation(f"rescaled object leaves [0, 1)^d: {box_lo} .. {box_hi}")
    return mapped, affine
