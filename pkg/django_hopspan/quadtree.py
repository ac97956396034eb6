"""
Dyadic cell arithmetic: smallest containing cells, alignment, shifting,
the quadtree centroid and the partition into generalized cells.

Cells are half-open. Level ``k`` cells have side ``2**-k``; the root of the
unit domain is level 0 and the root of the shifted domain ``[0, 2)^d`` is
level -1.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from django_hopspan.exceptions import InputError, PreconditionError
from django_hopspan.geometry import GeometricObject, bounding_box, side_length, translate

logger = logging.getLogger(__name__)

# Deeper levels overflow double coordinates in [0, 2)
MAX_LEVEL = 1000


@dataclass(frozen=True, order=True)
class QuadtreeCell:
    """A dyadic hypercube ``prod [i_j / 2^k, (i_j + 1) / 2^k)``."""

    level: int
    index: tuple[int, ...]

    @classmethod
    def root(cls, dimension: int, domain: float = 1.0) -> "QuadtreeCell":
        return cls(_root_level(domain), (0,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.index)

    @property
    def side(self) -> float:
        return math.ldexp(1.0, -self.level)

    @property
    def lo(self) -> tuple[float, ...]:
        return tuple(math.ldexp(i, -self.level) for i in self.index)

    @property
    def hi(self) -> tuple[float, ...]:
        return tuple(math.ldexp(i + 1, -self.level) for i in self.index)

    def parent(self) -> "QuadtreeCell":
        return QuadtreeCell(self.level - 1, tuple(i >> 1 for i in self.index))

    def children(self) -> list["QuadtreeCell"]:
        d = self.dimension
        out = []
        for bits in range(1 << d):
            out.append(
                QuadtreeCell(
                    self.level + 1,
                    tuple(2 * i + ((bits >> axis) & 1) for axis, i in enumerate(self.index)),
                )
            )
        return out

    def ancestor(self, level: int) -> "QuadtreeCell":
        shift = self.level - level
        if shift < 0:
            raise PreconditionError("ancestor level below the cell level")
        return QuadtreeCell(level, tuple(i >> shift for i in self.index))

    def contains_cell(self, other: "QuadtreeCell") -> bool:
        """Whether ``other`` is nested in (or equal to) this cell."""
        if other.level < self.level:
            return False
        return other.ancestor(self.level) == self

    def contains_point(self, p: Sequence[float]) -> bool:
        return all(math.floor(math.ldexp(x, self.level)) == i for x, i in zip(p, self.index))

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        if len(points) == 0:
            return np.zeros(0, dtype=bool)
        scaled = np.floor(np.ldexp(points, self.level))
        return np.all(scaled == np.asarray(self.index, dtype=float), axis=1)

    def as_dict(self) -> dict:
        return {"level": self.level, "index": list(self.index)}


@dataclass(frozen=True)
class GeneralizedCell:
    """An outer quadtree cell minus an optional strictly nested inner cell."""

    outer: QuadtreeCell
    inner: QuadtreeCell | None = None

    def __post_init__(self):
        if self.inner is not None and (
            self.inner == self.outer or not self.outer.contains_cell(self.inner)
        ):
            raise PreconditionError("inner cell must be strictly nested in the outer cell")

    def contains_point(self, p: Sequence[float]) -> bool:
        if not self.outer.contains_point(p):
            return False
        return self.inner is None or not self.inner.contains_point(p)

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        mask = self.outer.contains_points(points)
        if self.inner is not None:
            mask &= ~self.inner.contains_points(points)
        return mask

    def boundaries(self) -> list[QuadtreeCell]:
        """Cells whose boundaries together form the boundary of this region."""
        return [self.outer] if self.inner is None else [self.outer, self.inner]

    def as_dict(self) -> dict:
        return {
            "outer": self.outer.as_dict(),
            "inner": self.inner.as_dict() if self.inner is not None else None,
        }


def _root_level(domain: float) -> int:
    exponent = math.log2(domain)
    if exponent != int(exponent):
        raise InputError(f"domain must be a power of two, got {domain}")
    return -int(exponent)


def _require_inside(lo: Sequence[float], hi: Sequence[float], domain: float) -> None:
    if not all(0.0 <= a and b < domain for a, b in zip(lo, hi)):
        raise InputError(f"object is not inside [0, {domain})^d")


def smallest_containing_cell(
    lo: Sequence[float], hi: Sequence[float], domain: float = 1.0
) -> QuadtreeCell:
    """
    The unique smallest quadtree cell containing the closed box ``[lo, hi]``.

    Containment at level ``k`` holds iff ``floor(lo * 2^k) == floor(hi * 2^k)``
    on every axis, and it is monotone in ``k``.

    Args:
        lo: Lower corner.
        hi: Upper corner.
        domain: Side of the root cell (1 for the unit domain, 2 after shifting).

    Returns:
        QuadtreeCell: The smallest containing cell.

    Raises:
        InputError: If the box is not inside ``[0, domain)^d``.
    """
    _require_inside(lo, hi, domain)
    level = _root_level(domain)
    while level < MAX_LEVEL:
        nxt = level + 1
        if all(
            math.floor(math.ldexp(a, nxt)) == math.floor(math.ldexp(b, nxt)) for a, b in zip(lo, hi)
        ):
            level = nxt
        else:
            break
    return QuadtreeCell(level, tuple(math.floor(math.ldexp(a, level)) for a in lo))


def is_aligned(u: GeometricObject, C: float, domain: float = 1.0) -> bool:
    """
    Whether ``u`` lies in a quadtree cell of side at most ``C * side_length(u)``.

    Objects of side zero, or too small to separate from their containing cell
    at ``MAX_LEVEL``, lie in cells of every representable size and count as
    aligned.

    Args:
        u: A bounded object inside ``[0, domain)^d``.
        C: Alignment constant.
        domain: Side of the root cell.

    Returns:
        bool: The alignment decision, taken on the smallest containing cell.
    """
    lo, hi = bounding_box(u)
    if side_length(u) == 0:
        _require_inside(lo, hi, domain)
        return True
    cell = smallest_containing_cell(lo, hi, domain)
    return cell.level >= MAX_LEVEL or cell.side <= C * side_length(u)


def shift_object(u: GeometricObject, j: int, d_star: int) -> GeometricObject:
    """
    Translate ``u`` by ``(j / d_star, ..., j / d_star)``.

    Raises:
        InputError: If ``j`` is outside ``[0, d_star)`` or ``d_star`` is not
            an odd number larger than the dimension.
    """
    if d_star % 2 == 0 or d_star <= u.dimension:
        raise InputError(f"d_star must be odd and larger than d={u.dimension}, got {d_star}")
    if not 0 <= j < d_star:
        raise InputError(f"shift index {j} outside [0, {d_star})")
    if j == 0:
        return u
    return translate(u, (j / d_star,) * u.dimension)


def _points_array(points: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2:
        raise InputError("points must form an (n, d) array")
    return arr


def _child_keys(points: np.ndarray, level: int) -> np.ndarray:
    # Bit per axis of the child at level + 1 containing each point
    bits = np.mod(np.floor(np.ldexp(points, level + 1)), 2).astype(np.int64)
    weights = 1 << np.arange(points.shape[1], dtype=np.int64)
    return bits @ weights


def _descend(points: np.ndarray, start: QuadtreeCell) -> QuadtreeCell:
    n = len(points)
    d = start.dimension
    bound = math.ceil((2**d) * n / (2**d + 1))
    cell = start
    current = points
    while len(current) > bound:
        if cell.level >= MAX_LEVEL:
            raise PreconditionError("coincident points prevent a centroid cell")
        keys = _child_keys(current, cell.level)
        counts = np.bincount(keys, minlength=1 << d)
        # Lowest child key among the heaviest
        best = int(np.argmax(counts))
        cell = cell.children()[best]
        current = current[keys == best]
    return cell


def quadtree_centroid(
    points: Sequence[Sequence[float]] | np.ndarray, domain: float = 1.0
) -> QuadtreeCell:
    """
    Find a quadtree cell with at most ``ceil(2^d n / (2^d + 1))`` points inside
    and at most as many outside.

    Usage:
        cell = quadtree_centroid([(0.1, 0.1), (0.2, 0.3), (0.7, 0.9)])

    Args:
        points: Distinct points inside ``[0, domain)^d``.
        domain: Side of the root cell.

    Returns:
        QuadtreeCell: The centroid cell.

    Raises:
        InputError: If no points are given.
    """
    arr = _points_array(points) if len(points) else np.empty((0, 0))
    if len(arr) == 0:
        raise InputError("quadtree_centroid needs at least one point")
    root = QuadtreeCell.root(arr.shape[1], domain)
    if not bool(root.contains_points(arr).all()):
        raise InputError(f"points are not inside [0, {domain})^d")
    return _descend(arr, root)


def common_ancestor(a: QuadtreeCell, b: QuadtreeCell) -> QuadtreeCell:
    """Smallest cell containing both ``a`` and ``b``."""
    level = min(a.level, b.level)
    x, y = a.ancestor(level), b.ancestor(level)
    while x != y:
        x, y = x.parent(), y.parent()
    return x


def _split(region: GeneralizedCell, gamma: QuadtreeCell) -> Iterator[GeneralizedCell]:
    """Pieces of ``region`` such that ``gamma`` is one piece and each has one hole at most."""
    outer, inner = region.outer, region.inner

    if gamma == outer:
        for child in outer.children():
            if inner is None or not child.contains_cell(inner):
                yield GeneralizedCell(child)
            elif child != inner:
                yield GeneralizedCell(child, inner)
        return

    if inner is None or gamma.contains_cell(inner):
        yield GeneralizedCell(gamma, inner)
        yield GeneralizedCell(outer, gamma)
        return

    # gamma and inner are disjoint: cut at their smallest common ancestor
    mu = common_ancestor(gamma, inner)
    yield GeneralizedCell(gamma)
    for child in mu.children():
        if child.contains_cell(gamma):
            if child != gamma:
                yield GeneralizedCell(child, gamma)
        elif child.contains_cell(inner):
            if child != inner:
                yield GeneralizedCell(child, inner)
        else:
            yield GeneralizedCell(child)
    if mu != outer:
        yield GeneralizedCell(outer, mu)


def partition_points(
    points: Sequence[Sequence[float]] | np.ndarray, r: int, domain: float = 2.0
) -> list[tuple[GeneralizedCell, np.ndarray]]:
    """
    Partition ``[0, domain)^d`` into generalized cells holding at most ``r`` points.

    Returns:
        list: ``(cell, point_indices)`` pairs; every point index appears once.
    """
    r = max(1, int(r))
    arr = _points_array(points) if len(points) else np.empty((0, 1))
    d = arr.shape[1]
    root = GeneralizedCell(QuadtreeCell.root(d, domain))
    if len(arr) and not bool(root.contains_points(arr).all()):
        raise InputError(f"points are not inside [0, {domain})^d")

    result: list[tuple[GeneralizedCell, np.ndarray]] = []
    stack = [(root, np.arange(len(arr)))]
    while stack:
        region, idx = stack.pop()
        if len(idx) <= r:
            result.append((region, idx))
            continue
        gamma = _descend(arr[idx], region.outer)
        for piece in _split(region, gamma):
            mask = piece.contains_points(arr[idx])
            stack.append((piece, idx[mask]))

    result.sort(key=lambda item: (item[0].outer, item[0].inner is not None, item[0].inner or item[0].outer))
    logger.debug(f"partitioned {len(arr)} points into {len(result)} generalized cells (r={r})")
    return result


def quadtree_partition(
    points: Sequence[Sequence[float]] | np.ndarray, r: int, domain: float = 2.0
) -> list[GeneralizedCell]:
    """
    Partition the root cell into generalized quadtree cells with at most ``r``
    points each.

    Args:
        points: Distinct points inside ``[0, domain)^d``.
        r: Capacity per cell.
        domain: Side of the root cell (2 for the shifted domain).

    Returns:
        list[GeneralizedCell]: Cells that tile the root cell.
    """
    return [cell for cell, _ in partition_points(points, r, domain)]
