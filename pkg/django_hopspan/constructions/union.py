"""
2-hop spanners for planar objects of near-linear union complexity.

Every level ``i`` builds a shallow cutting with ``k = 2^i`` and
``r = n / 2^(i-2)``: square cells crossed by at most ``n / r`` object
boundaries that together cover the points of depth at most ``k``. A cell
lying inside some object gets a star centered at its lowest containing
object over all objects meeting the cell.

Cells come from a quadtree over the bounding square of the input. A seeded
sample of ``ceil(n / k)`` objects drives the first splits; after that only
cells holding a probe point of depth at most ``k`` are refined. Probes are a
generic grid, one point inside every intersecting pair and, for crossing disks,
one point next to each crossing of their boundaries.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError, ShallowCuttingError, StructuralViolation
from django_hopspan.geometry import (
    BOX_KINDS,
    ROUND_KINDS,
    GeometricObject,
    ObjectKind,
    bounding_box,
    contains_points,
    object_contains_box,
    object_meets_box,
)
from django_hopspan.graph import (
    Edge,
    IntersectionGraph,
    Spanner,
    build_intersection_graph,
    normalize_edge,
)

logger = logging.getLogger(__name__)

# Sample-driven splits stop at this depth; deeper splits need a probe
SAMPLE_SPLIT_DEPTH = 10
# Extra depth granted to unresolved cells in each further round
ROUND_DEPTH_STEP = 6
# Irrational offsets keep grid probes off axis-aligned input coordinates
PROBE_OFFSETS = (0.6180339887498949, 0.41421356237309515)
# Lens-corner probes sit this far from the crossing point toward the lens middle
LENS_PULL = 0.125
# Pairs overlapping by at most this share of the bounding square only touch
CONTACT_TOLERANCE = 2.0**-24

SUPPORTED_KINDS = {ObjectKind.DISK, ObjectKind.BALL, ObjectKind.RECT, ObjectKind.BOX}


@dataclass(frozen=True)
class CuttingCell:
    """One retained square cell of a shallow cutting."""

    depth: int
    ix: int
    iy: int
    lo: tuple[float, float]
    hi: tuple[float, float]
    crossing: tuple[int, ...]
    containing: tuple[int, ...]

    @property
    def witness(self) -> int | None:
        return self.containing[0] if self.containing else None

    @property
    def meeting(self) -> tuple[int, ...]:
        return tuple(sorted(self.crossing + self.containing))

    def as_dict(self) -> dict:
        return {
            "key": [self.depth, self.ix, self.iy],
            "lo": list(self.lo),
            "hi": list(self.hi),
            "crossing": list(self.crossing),
            "containing": len(self.containing),
            "witness": self.witness,
        }


@dataclass
class ShallowCuttingLevel:
    i: int
    k: int
    r: float
    cells: list[CuttingCell] = field(default_factory=list)
    crossing_limit: int = 0
    dropped: int = 0
    rounds: int = 1
    probes: int = 0
    covered_probes: int = 0
    unresolved_pairs: int = 0

    @property
    def max_crossing(self) -> int:
        return max((len(c.crossing) for c in self.cells), default=0)

    def diagnostics(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "r": self.r,
            "crossing_limit": self.crossing_limit,
            "cells": len(self.cells),
            "max_crossing": self.max_crossing,
            "dropped": self.dropped,
            "rounds": self.rounds,
            "probes": self.probes,
            "covered_probes": self.covered_probes,
            "unresolved_pairs": self.unresolved_pairs,
        }


def _check_objects(objects: Sequence[GeometricObject]) -> None:
    for u in objects:
        if u.kind not in SUPPORTED_KINDS or u.dimension != 2:
            raise InputError(
                f"the union construction handles planar disks and boxes, got {u.kind.value} in d={u.dimension}"
            )


def _bounding_square(objects: Sequence[GeometricObject]) -> tuple[tuple[float, float], float]:
    boxes = [bounding_box(u) for u in objects]
    lo = (min(b[0][0] for b in boxes), min(b[0][1] for b in boxes))
    hi = (max(b[1][0] for b in boxes), max(b[1][1] for b in boxes))
    side = max(hi[0] - lo[0], hi[1] - lo[1], 1e-12) * (1.0 + 2.0**-20)
    return lo, side


def grid_probes(objects: Sequence[GeometricObject], size: int | None = None) -> np.ndarray:
    """``size x size`` probe points spread over the bounding square at generic offsets."""
    size = size or get_conf().SHALLOW_PROBE_GRID
    lo, side = _bounding_square(objects)
    steps = np.arange(size, dtype=float)
    xs = lo[0] + (steps + PROBE_OFFSETS[0]) * side / size
    ys = lo[1] + (steps + PROBE_OFFSETS[1]) * side / size
    return np.stack(np.meshgrid(xs, ys, indexing="ij"), axis=-1).reshape(-1, 2)


def intersection_witness(a: GeometricObject, b: GeometricObject) -> tuple[float, float]:
    """A point of ``a`` and ``b``, away from their boundaries when the overlap allows it."""
    if a.kind in BOX_KINDS and b.kind in BOX_KINDS:
        lo = np.maximum(a.lo, b.lo)
        hi = np.minimum(a.hi, b.hi)
        return tuple(float(x) for x in (lo + hi) / 2.0)
    if a.kind in ROUND_KINDS and b.kind in ROUND_KINDS:
        ca, cb = np.asarray(a.center), np.asarray(b.center)
        dist = float(np.linalg.norm(cb - ca))
        if dist == 0.0:
            return tuple(float(x) for x in ca)
        s = (max(-a.radius, dist - b.radius) + min(a.radius, dist + b.radius)) / 2.0
        return tuple(float(x) for x in ca + (cb - ca) * (s / dist))
    disk, box = (a, b) if a.kind in ROUND_KINDS else (b, a)
    center = np.asarray(disk.center)
    nearest = np.clip(center, box.lo, box.hi)
    dist = float(np.linalg.norm(center - nearest))
    if dist == 0.0 or dist >= disk.radius:
        return tuple(float(x) for x in nearest)
    # Step from the nearest box point into the box, staying inside the disk
    step = min((disk.radius - dist) / 2.0, min(h - l for l, h in zip(box.lo, box.hi)) / 2.0)
    inward = (nearest - center) / dist
    return tuple(float(x) for x in np.clip(nearest + inward * step, box.lo, box.hi))


def touches_only(a: GeometricObject, b: GeometricObject, tol: float = 0.0) -> bool:
    """Whether ``a`` and ``b`` share no interior point, up to ``tol``."""
    if a.kind in BOX_KINDS and b.kind in BOX_KINDS:
        overlap = np.minimum(a.hi, b.hi) - np.maximum(a.lo, b.lo)
        return bool(overlap.min() <= tol)
    if a.kind in ROUND_KINDS and b.kind in ROUND_KINDS:
        dist = float(np.linalg.norm(np.subtract(a.center, b.center)))
        return min(a.radius, b.radius) <= tol or a.radius + b.radius - dist <= tol
    disk, box = (a, b) if a.kind in ROUND_KINDS else (b, a)
    if disk.radius <= tol or min(h - l for l, h in zip(box.lo, box.hi)) <= tol:
        return True
    center = np.asarray(disk.center)
    nearest = np.clip(center, box.lo, box.hi)
    if np.array_equal(nearest, center):
        return False
    return disk.radius - float(np.linalg.norm(center - nearest)) <= tol


def lens_corners(a: GeometricObject, b: GeometricObject) -> list[tuple[float, float]]:
    """
    Points just inside the lens of two properly crossing disks, one next to
    each crossing point of their boundaries.
    """
    ca, cb = np.asarray(a.center), np.asarray(b.center)
    dist = float(np.linalg.norm(cb - ca))
    if dist == 0.0 or dist >= a.radius + b.radius or dist <= abs(a.radius - b.radius):
        return []
    along = (dist**2 + a.radius**2 - b.radius**2) / (2.0 * dist)
    across = math.sqrt(max(0.0, a.radius**2 - along**2))
    unit = (cb - ca) / dist
    normal = np.array([-unit[1], unit[0]])
    middle = np.asarray(intersection_witness(a, b))
    corners = []
    for sign in (1.0, -1.0):
        vertex = ca + unit * along + normal * (sign * across)
        corners.append(tuple(float(x) for x in vertex + (middle - vertex) * LENS_PULL))
    return corners


def probe_depths(objects: Sequence[GeometricObject], probes: np.ndarray) -> np.ndarray:
    counts = np.zeros(len(probes), dtype=np.int64)
    for u in objects:
        counts += contains_points(u, probes)
    return counts


class _Refiner:
    """Probe-driven quadtree refinement for one level."""

    def __init__(self, objects, k, limit, sample, probes, depths):
        self.config = get_conf()
        self.objects = objects
        self.k = k
        self.limit = limit
        self.sample = set(sample)
        self.probes = probes
        self.active = depths <= k
        self.origin, self.side = _bounding_square(objects)
        self.cells: list[CuttingCell] = []
        self.unresolved: list[tuple] = []
        self.dropped = 0

    def _box(self, depth: int, ix: int, iy: int) -> tuple[tuple[float, float], tuple[float, float]]:
        width = self.side / (1 << depth)
        lo = (self.origin[0] + ix * width, self.origin[1] + iy * width)
        return lo, (lo[0] + width, lo[1] + width)

    def refine(self, jobs: list[tuple], max_depth: int) -> None:
        stack = list(jobs)
        while stack:
            depth, ix, iy, candidates, containing, probe_idx = stack.pop()
            probe_idx = probe_idx[self.active[probe_idx]]
            if probe_idx.size == 0:
                self.dropped += 1
                continue
            lo, hi = self._box(depth, ix, iy)
            crossing = []
            inside = list(containing)
            for v in candidates:
                u = self.objects[v]
                if not object_meets_box(u, lo, hi):
                    continue
                if object_contains_box(u, lo, hi):
                    inside.append(v)
                else:
                    crossing.append(v)
            if len(inside) > self.k:
                self.dropped += 1
                continue

            sampled = sum(1 for v in crossing if v in self.sample)
            resolved = len(crossing) <= self.limit
            seeded = sampled <= self.config.SHALLOW_SAMPLE_DEPTH or depth >= SAMPLE_SPLIT_DEPTH
            job = (depth, ix, iy, crossing, inside, probe_idx)
            if resolved and seeded:
                self.cells.append(
                    CuttingCell(depth, ix, iy, lo, hi, tuple(sorted(crossing)), tuple(sorted(inside)))
                )
                continue
            if depth >= max_depth:
                self.unresolved.append(job)
                continue

            mid_x = (lo[0] + hi[0]) / 2.0
            mid_y = (lo[1] + hi[1]) / 2.0
            pts = self.probes[probe_idx]
            right = pts[:, 0] >= mid_x
            top = pts[:, 1] >= mid_y
            for bx in (0, 1):
                for by in (0, 1):
                    mask = (right == bool(bx)) & (top == bool(by))
                    stack.append(
                        (depth + 1, 2 * ix + bx, 2 * iy + by, crossing, inside, probe_idx[mask])
                    )


def shallow_cutting(
    objects: Sequence[GeometricObject],
    k: int,
    r: float,
    seed: int | None = None,
    probes: np.ndarray | None = None,
    depths: np.ndarray | None = None,
    soft_mask: np.ndarray | None = None,
    level: int = 0,
) -> ShallowCuttingLevel:
    """
    Build square cells crossed by at most ``floor(n / r)`` boundaries that
    cover every probe point of depth at most ``k``.

    Args:
        objects: Planar disks or boxes.
        k: Depth threshold.
        r: Crossing parameter; may be fractional.
        seed: Seed of the ``ceil(n / k)`` object sample.
        probes: Probe points; a generic grid when omitted.
        depths: Depth of every probe, computed when omitted.
        soft_mask: Marks probes that may stay unresolved: the points of
            pairs that only touch on their boundaries. Every other probe of
            depth at most ``k`` must end up in a cell.
        level: Level index reported in the diagnostics.

    Returns:
        ShallowCuttingLevel: The retained cells and their bookkeeping.

    Raises:
        ShallowCuttingError: If a probe outside ``soft_mask`` of depth at most
            ``k`` is still uncovered after the last refinement round.
    """
    objects = list(objects)
    _check_objects(objects)
    if k < 1 or r <= 0:
        raise InputError(f"shallow cutting needs k >= 1 and r > 0, got k={k}, r={r}")
    config = get_conf()
    n = len(objects)
    limit = math.floor(n / r)
    result = ShallowCuttingLevel(i=level, k=k, r=r, crossing_limit=limit)
    if n == 0:
        return result

    if probes is None:
        probes = grid_probes(objects)
    if depths is None:
        depths = probe_depths(objects, probes)
    if soft_mask is None:
        soft_mask = np.zeros(len(probes), dtype=bool)

    rng = np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)
    sample = rng.choice(n, size=min(n, math.ceil(n / k)), replace=False)

    refiner = _Refiner(objects, k, limit, sample, probes, depths)
    jobs = [(0, 0, 0, list(range(n)), [], np.arange(len(probes)))]
    max_depth = config.SHALLOW_MAX_DEPTH
    refiner.refine(jobs, max_depth)
    while refiner.unresolved and result.rounds < config.SHALLOW_MAX_ROUNDS:
        result.rounds += 1
        max_depth += ROUND_DEPTH_STEP
        jobs, refiner.unresolved = refiner.unresolved, []
        refiner.refine(jobs, max_depth)

    stuck = [idx for job in refiner.unresolved for idx in job[5]]
    hard_stuck = [int(p) for p in stuck if not soft_mask[p]]
    result.cells = sorted(refiner.cells, key=lambda c: (c.depth, c.ix, c.iy))
    result.dropped = refiner.dropped
    result.probes = int(np.count_nonzero(depths <= k))
    result.covered_probes = result.probes - len(stuck)
    result.unresolved_pairs = len(stuck) - len(hard_stuck)
    if hard_stuck:
        diagnostics = result.diagnostics()
        diagnostics["uncovered_probes"] = [list(map(float, probes[p])) for p in hard_stuck[:20]]
        raise ShallowCuttingError(
            f"{len(hard_stuck)} probe(s) of depth <= {k} stay uncovered at level {level}",
            diagnostics=diagnostics,
        )
    return result


def two_hop_spanner_union(
    objects: Sequence[GeometricObject],
    graph: IntersectionGraph | None = None,
    seed: int | None = None,
) -> Spanner:
    """
    2-hop spanner from stars on shallow-cutting cells.

    Levels ``i = 1 .. floor(log2 n) + 1`` each contribute, for every cell inside
    some object, a star centered at the lowest containing object over all
    objects meeting the cell. Pairs that only touch on their boundaries may
    end up in no common star; those edges are kept directly and counted as
    degenerate.

    Args:
        objects: Planar disks or boxes.
        graph: Their intersection graph; built if omitted.
        seed: Base seed; level ``i`` samples with ``seed + i``.

    Returns:
        Spanner: Tagged ``union-2hop`` with stretch 2.

    Raises:
        ShallowCuttingError: If a level leaves a required probe uncovered.
        StructuralViolation: If two objects with a common interior point
            share no star.
    """
    objects = list(objects)
    _check_objects(objects)
    seed = get_conf().DEFAULT_SEED if seed is None else seed
    if graph is None:
        graph = build_intersection_graph(objects)
    n = len(objects)
    if graph.m == 0:
        return Spanner(n, [], 2, "union-2hop", {"levels": [], "degenerate_edges": 0, "seed": seed})

    _, side = _bounding_square(objects)
    tol = side * CONTACT_TOLERANCE
    touching = {(u, v) for u, v in graph.edges() if touches_only(objects[u], objects[v], tol)}
    pair_points, soft, corners = [], [], []
    for u, v in graph.edges():
        pair_points.append(intersection_witness(objects[u], objects[v]))
        soft.append((u, v) in touching)
        if (u, v) not in touching and objects[u].kind in ROUND_KINDS and objects[v].kind in ROUND_KINDS:
            corners.extend(lens_corners(objects[u], objects[v]))

    grid = grid_probes(objects)
    blocks = [grid, np.asarray(pair_points, dtype=float).reshape(-1, 2), np.asarray(corners, dtype=float).reshape(-1, 2)]
    probes = np.vstack(blocks)
    soft_mask = np.concatenate(
        [np.zeros(len(grid), dtype=bool), np.asarray(soft, dtype=bool), np.zeros(len(corners), dtype=bool)]
    )
    depths = probe_depths(objects, probes)

    edges: set[Edge] = set()
    stars_of: list[set[int]] = [set() for _ in range(n)]
    star_count = 0
    levels = []
    for i in range(1, n.bit_length() + 1):
        level = shallow_cutting(
            objects,
            k=2**i,
            r=n / 2 ** (i - 2),
            seed=seed + i,
            probes=probes,
            depths=depths,
            soft_mask=soft_mask,
            level=i,
        )
        levels.append(level.diagnostics())
        for cell in level.cells:
            center = cell.witness
            if center is None:
                continue
            members = [v for v in cell.meeting if v == center or graph.has_edge(center, v)]
            if len(members) < 2:
                continue
            for v in members:
                stars_of[v].add(star_count)
                if v != center:
                    edges.add(normalize_edge(center, v))
            star_count += 1

    uncovered = [(u, v) for u, v in graph.edges() if (u, v) not in edges and not stars_of[u] & stars_of[v]]
    broken = [pair for pair in uncovered if pair not in touching]
    if broken:
        raise StructuralViolation(
            f"union-2hop: {len(broken)} overlapping pair(s) share no star, first {broken[:5]}"
        )
    edges.update(uncovered)
    if uncovered:
        logger.info(f"union-2hop kept {len(uncovered)} touching edge(s) directly")
    logger.debug(f"union-2hop: n={n} m={graph.m} stars={star_count} spanner={len(edges)}")
    params = {
        "levels": levels,
        "cells_per_level": [level["cells"] for level in levels],
        "stars": star_count,
        "degenerate_edges": len(uncovered),
        "corner_probes": len(corners),
        "seed": seed,
    }
    return Spanner(n, sorted(edges), 2, "union-2hop", params)
