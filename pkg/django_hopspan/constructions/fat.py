"""
Hop spanners for fat objects in R^d.

Objects are rescaled into [0, 1)^d and split into d* = 2d + 1 shift groups;
inside a group every object is (2d*)-aligned. The 3-hop construction
recurses on the objects inside and outside a centroid cell and connects the
objects crossing its boundary through stars on a hitting set. The t_k
construction partitions into generalized cells, assigns hit objects to
stars and recurses one level down on the unions of the stars.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError, StructuralViolation
from django_hopspan.geometry import (
    BOX_KINDS,
    ROUND_KINDS,
    AffineMap,
    GeometricObject,
    ObjectKind,
    contains_points,
    leftmost_point,
    object_inside_box,
    object_meets_box,
    representative_point,
    rescale_to_unit,
    side_length,
)
from django_hopspan.graph import (
    Edge,
    IntersectionGraph,
    Spanner,
    StarSystem,
    build_intersection_graph,
    normalize_edge,
    quotient_union_graph,
)
from django_hopspan.quadtree import (
    GeneralizedCell,
    QuadtreeCell,
    is_aligned,
    partition_points,
    quadtree_centroid,
    shift_object,
)
from django_hopspan.stretch import StretchFamily, StretchSchedule, stretch_bound

logger = logging.getLogger(__name__)

# Objects closer than this to a cell face count as touching it
BOUNDARY_SLACK = 2.0**-40
# Aspect ratios this close below a multiple of 1/3 keep the lower class
ASPECT_SLACK = 1e-9


def measured_fatness(objects: Sequence[GeometricObject]) -> tuple[float, int]:
    """
    Points per hypercube of side ``l`` that hit every object of side at least
    ``l`` meeting it, for the kinds present.

    A ball of diameter ``l`` holds a cube of side ``l / sqrt(d)``, and a box of
    aspect ratio ``a`` one of side ``l / a``, so a grid of that spacing over the
    ``l``-neighbourhood of the hypercube hits them all.

    Returns:
        tuple: The constant ``c`` and the number of thin objects (boxes with a
        zero extent but positive side), which no finite ``c`` covers.
    """
    c = 1.0
    thin = 0
    for u in objects:
        if u.kind == ObjectKind.UNION:
            inner, inner_thin = measured_fatness(u.parts)
            c, thin = max(c, inner * 4**u.dimension), thin + inner_thin
        elif u.kind in ROUND_KINDS:
            c = max(c, float((math.ceil(3 * math.sqrt(u.dimension)) + 1) ** u.dimension))
        else:
            extents = [b - a for a, b in zip(u.lo, u.hi)]
            if max(extents) == 0:
                continue
            if min(extents) == 0:
                thin += 1
                continue
            aspect = max(extents) / min(extents)
            c = max(c, float((math.ceil(3 * aspect - ASPECT_SLACK) + 1) ** u.dimension))
    return c, thin


def _has_hitting_rule(u: GeometricObject) -> bool:
    if u.kind == ObjectKind.UNION:
        return all(_has_hitting_rule(part) for part in u.parts)
    return u.kind in ROUND_KINDS or (u.kind in BOX_KINDS and u.kind != ObjectKind.V_LINE)


@dataclass
class FatInstance:
    """
    Fat objects rescaled into ``[0, 1)^d``.

    Usage:
        instance = FatInstance.from_objects(disks)
        spanner = fat_spanner_3hop(instance)
    """

    objects: list[GeometricObject]
    dimension: int
    affine: AffineMap
    source: list[GeometricObject] = field(default_factory=list, repr=False)
    fatness: float = 1.0
    thin_objects: int = 0

    @property
    def d_star(self) -> int:
        return 2 * self.dimension + 1

    @property
    def alignment(self) -> int:
        return 2 * self.d_star

    @classmethod
    def from_objects(cls, objects: Sequence[GeometricObject]) -> "FatInstance":
        objects = list(objects)
        if not objects:
            return cls(objects=[], dimension=1, affine=AffineMap((), 1.0), source=[])
        dimension = objects[0].dimension
        for u in objects:
            if u.dimension != dimension:
                raise InputError("all objects must share one dimension")
            if not _has_hitting_rule(u):
                raise InputError(f"{u.kind.value} objects are not supported by the fat constructions")
        scaled, affine = rescale_to_unit(objects)
        fatness, thin = measured_fatness(objects)
        if thin:
            logger.warning(f"{thin} box(es) have a zero extent; their hitting points are fallbacks")
        return cls(
            objects=scaled,
            dimension=dimension,
            affine=affine,
            source=objects,
            fatness=fatness,
            thin_objects=thin,
        )

    def fatness_at(self, depth: int) -> float:
        """Fatness of the star unions ``depth`` recursion levels down."""
        return self.fatness * 4 ** (self.dimension * depth)

    def hitting_bound(self, depth: int) -> float:
        """Hitting points one cell boundary may need ``depth`` levels down."""
        return self.fatness_at(depth) * self.alignment**self.dimension


def shift_groups(instance: FatInstance) -> list[list[int]]:
    """
    Group ``j`` holds the objects that are ``(2d*)``-aligned after shifting by
    ``j / d*``; every object misses at most ``d`` groups.
    """
    groups: list[list[int]] = [[] for _ in range(instance.d_star)]
    for i, u in enumerate(instance.objects):
        for j in range(instance.d_star):
            if is_aligned(shift_object(u, j, instance.d_star), instance.alignment, domain=2.0):
                groups[j].append(i)
    return groups


@dataclass
class HittingSet:
    """
    Points hitting every object that crosses the boundary of a cell.

    ``violations`` counts objects of side at least ``min_side`` the grid
    missed; each got a point of its own.
    """

    cell: QuadtreeCell | GeneralizedCell
    points: list[tuple[float, ...]]
    min_side: float
    targets: list[int] = field(default_factory=list)
    fallbacks: int = 0
    violations: int = 0


def _meets_grown(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    grown_lo = tuple(a - BOUNDARY_SLACK for a in lo)
    grown_hi = tuple(b + BOUNDARY_SLACK for b in hi)
    return object_meets_box(u, grown_lo, grown_hi)


def _crossing(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    """Whether ``u`` touches the closed box but is not strictly inside it."""
    return _meets_grown(u, lo, hi) and not _strictly_inside(u, lo, hi)


def _strictly_inside(u: GeometricObject, lo: Sequence[float], hi: Sequence[float]) -> bool:
    inner_lo = tuple(a + BOUNDARY_SLACK for a in lo)
    inner_hi = tuple(b - BOUNDARY_SLACK for b in hi)
    return object_inside_box(u, inner_lo, inner_hi)


def _required_spacing(u: GeometricObject) -> float:
    """
    Side of the largest axis cube inside ``u``; a grid this fine hits ``u``.

    The hitting grid takes the smallest of these over the qualifying targets
    rather than a fixed ``l / (4 sqrt(d))`` for balls or ``l / (2d*)`` for
    boxes. For a ball of side at least ``l`` it is ``l / sqrt(d)`` or more, so
    the grid is never finer than the fixed rule needs.
    """
    if u.kind in ROUND_KINDS:
        return 2.0 * u.radius / math.sqrt(u.dimension)
    if u.kind in BOX_KINDS:
        return min(b - a for a, b in zip(u.lo, u.hi))
    return max(_required_spacing(part) for part in u.parts)


def _boundary_points(
    cell: QuadtreeCell, objects: Sequence[GeometricObject], targets: list[int], d_star: int
) -> HittingSet:
    config = get_conf()
    d = cell.dimension
    side = cell.side
    min_side = side / (2 * d_star)
    result = HittingSet(cell=cell, points=[], min_side=min_side, targets=list(targets))
    if not targets:
        return result

    spacings = [
        _required_spacing(objects[i]) for i in targets if side_length(objects[i]) >= min_side
    ]
    spacings = [h for h in spacings if h > 0]
    unhit = list(targets)
    if spacings:
        h = min(spacings)
        per_axis = math.ceil(3 * side / h) + 1
        cap = max(2, int(config.HITTING_GRID_LIMIT ** (1.0 / d)))
        per_axis = min(per_axis, cap)
        axes = [np.linspace(a - side, a + 2 * side, per_axis) for a in cell.lo]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)

        hits = np.stack([contains_points(objects[i], grid) for i in targets])
        useful = hits.any(axis=0)
        grid, hits = grid[useful], hits[:, useful]
        remaining = np.ones(len(targets), dtype=bool)
        while grid.size and remaining.any():
            counts = hits[remaining].sum(axis=0)
            best = int(np.argmax(counts))
            if counts[best] == 0:
                break
            result.points.append(tuple(float(x) for x in grid[best]))
            remaining &= ~hits[:, best]
        unhit = [targets[t] for t in np.flatnonzero(remaining)]

    for i in unhit:
        u = objects[i]
        if result.points and contains_points(u, np.asarray(result.points)).any():
            continue
        result.points.append(tuple(representative_point(u)))
        result.fallbacks += 1
        if side_length(u) >= min_side:
            result.violations += 1
    return result


def boundary_hitting_set(
    cell: QuadtreeCell | GeneralizedCell,
    objects: Sequence[GeometricObject],
    d_star: int,
) -> HittingSet:
    """
    Build points hitting every object that crosses the boundary of ``cell``.

    A grid over the cell's side-length neighbourhood is pruned by greedy
    cover; each object the grid misses gets a point of its own.

    Args:
        cell: A quadtree cell, or a generalized cell (both boundaries).
        objects: Objects with a hitting rule (balls, boxes, their unions).
        d_star: ``2d + 1``.

    Returns:
        HittingSet: The points plus fallback bookkeeping.
    """
    cells = cell.boundaries() if isinstance(cell, GeneralizedCell) else [cell]
    merged = None
    for part in cells:
        targets = [i for i, u in enumerate(objects) if _crossing(u, part.lo, part.hi)]
        found = _boundary_points(part, objects, targets, d_star)
        if merged is None:
            merged = found
            merged.cell = cell
        else:
            merged.points.extend(found.points)
            merged.targets = sorted(set(merged.targets) | set(found.targets))
            merged.fallbacks += found.fallbacks
            merged.violations += found.violations
    return merged


class _FatBuilder:
    """Recursive constructions over one shift group; edges use group-local indices."""

    def __init__(self, instance: FatInstance, top_k: int = 1):
        self.config = get_conf()
        self.instance = instance
        self.d_star = instance.d_star
        self.top_k = top_k
        self.violations = 0
        self.fallbacks = 0
        self.over_bound = 0
        self.cells = [0] * top_k

    def _record(self, hitting: HittingSet, k: int) -> None:
        depth = self.top_k - max(k, 1)
        self.violations += hitting.violations
        self.fallbacks += hitting.fallbacks
        self.cells[depth] += 1
        if len(hitting.points) > self.instance.hitting_bound(depth):
            self.over_bound += 1

    def _points(self, objects: Sequence[GeometricObject]) -> np.ndarray:
        pts = np.array([leftmost_point(u) for u in objects], dtype=float)
        rng = np.random.default_rng(self.config.JITTER_SEED)
        pts += rng.uniform(0.0, self.config.JITTER_MAGNITUDE, size=pts.shape)
        return pts

    def _hit_lists(self, objects: Sequence[GeometricObject], points: list) -> list[list[int]]:
        if not points:
            return []
        pts = np.asarray(points, dtype=float)
        hits = np.stack([contains_points(u, pts) for u in objects])
        return [[int(v) for v in np.flatnonzero(hits[:, p])] for p in range(len(points))]

    def _stars(self, graph: IntersectionGraph, members: list[int]) -> list[tuple[int, list[int]]]:
        """Split objects sharing a point into stars whose centers are graph-adjacent to all members."""
        stars = []
        left = sorted(members)
        while left:
            center = left[0]
            nbrs = set(graph.adjacency[center])
            star = [center] + [v for v in left[1:] if v in nbrs]
            stars.append((center, star))
            taken = set(star)
            left = [v for v in left if v not in taken]
        return stars

    def three_hop(self, graph: IntersectionGraph) -> set[Edge]:
        objects = graph.object_ref
        n = graph.n
        if n <= self.config.RECURSION_CUTOFF or graph.m == 0:
            return set(graph.edges())

        gamma = quadtree_centroid(self._points(objects), domain=2.0)
        lo, hi = gamma.lo, gamma.hi
        inside = [i for i, u in enumerate(objects) if _strictly_inside(u, lo, hi)]
        crossing = [i for i, u in enumerate(objects) if _crossing(u, lo, hi)]
        skip = set(inside) | set(crossing)
        outside = [i for i in range(n) if i not in skip]
        if len(inside) == n or len(outside) == n:
            return set(graph.edges())

        edges: set[Edge] = set()
        for part in (inside, outside):
            if len(part) > 1:
                sub, parent = graph.induced_subgraph(part)
                edges.update(normalize_edge(parent[a], parent[b]) for a, b in self.three_hop(sub))

        hitting = _boundary_points(gamma, objects, crossing, self.d_star)
        self._record(hitting, 1)
        for hit in self._hit_lists(objects, hitting.points):
            for center, star in self._stars(graph, hit):
                edges.update(normalize_edge(center, v) for v in star if v != center)
                edges.update(self._attach(graph, star))
        return edges

    def _attach(self, graph: IntersectionGraph, star: list[int]) -> set[Edge]:
        """One edge from every neighbour of the star to its lowest adjacent member."""
        members = set(star)
        attached: dict[int, int] = {}
        for w in sorted(star):
            for u in graph.adjacency[w]:
                if u not in members and u not in attached:
                    attached[u] = w
        return {normalize_edge(u, w) for u, w in attached.items()}

    def tk_hop(self, graph: IntersectionGraph, k: int) -> set[Edge]:
        if k <= 1:
            return self.three_hop(graph)
        objects = graph.object_ref
        n = graph.n
        if n <= self.config.RECURSION_CUTOFF or graph.m == 0:
            return set(graph.edges())

        r = StretchSchedule(StretchFamily.FAT, k).r(n)
        cells = partition_points(self._points(objects), r, domain=2.0)
        edges: set[Edge] = set()
        all_points: list[tuple[float, ...]] = []

        for cell, _ in cells:
            inner = cell.inner
            inside = [
                i
                for i, u in enumerate(objects)
                if _strictly_inside(u, cell.outer.lo, cell.outer.hi)
                and (inner is None or not _meets_grown(u, inner.lo, inner.hi))
            ]
            if len(inside) > 1:
                if len(inside) == n:
                    return set(graph.edges())
                sub, parent = graph.induced_subgraph(inside)
                edges.update(normalize_edge(parent[a], parent[b]) for a, b in self.tk_hop(sub, k))

            hitting = boundary_hitting_set(cell, objects, self.d_star)
            self._record(hitting, k)
            hit_lists = self._hit_lists(objects, hitting.points)
            for hit in hit_lists:
                hit_set = set(hit)
                for u in inside:
                    for w in graph.adjacency[u]:
                        if w in hit_set:
                            edges.add(normalize_edge(u, w))
                            break
            all_points.extend(hitting.points)

        # Assign each hit object to the first point hitting it
        assigned: dict[int, int] = {}
        for p, hit in enumerate(self._hit_lists(objects, all_points)):
            for v in hit:
                assigned.setdefault(int(v), p)
        groups: dict[int, list[int]] = {}
        for v, p in sorted(assigned.items()):
            groups.setdefault(p, []).append(v)

        system = StarSystem()
        for p in sorted(groups):
            for center, star in self._stars(graph, groups[p]):
                system.add(center, star)
                edges.update(normalize_edge(center, v) for v in star if v != center)

        if len(system.stars) > 1:
            quotient = quotient_union_graph(graph, system)
            unions = tuple(
                GeometricObject.union([objects[v] for v in star.members], members=star.members)
                for star in system.stars
            )
            quotient = IntersectionGraph(
                adjacency=quotient.adjacency, object_ref=unions, witnesses=quotient.witnesses
            )
            for a, b in self.tk_hop(quotient, k - 1):
                edges.add(normalize_edge(*quotient.witnesses[normalize_edge(a, b)]))
        return edges


def _group_graph(
    instance: FatInstance, graph: IntersectionGraph, group: list[int], j: int
) -> tuple[IntersectionGraph, list[int]]:
    sub, parent = graph.induced_subgraph(group)
    shifted = tuple(shift_object(instance.objects[i], j, instance.d_star) for i in parent)
    return IntersectionGraph(adjacency=sub.adjacency, object_ref=shifted), parent


def _check_group_cover(graph: IntersectionGraph, groups: list[list[int]]) -> None:
    """Raise if some intersecting pair shares no shift group."""
    member_of: dict[int, set[int]] = {}
    for j, group in enumerate(groups):
        for i in group:
            member_of.setdefault(i, set()).add(j)
    missing = [(u, v) for u, v in graph.edges() if not member_of.get(u, set()) & member_of.get(v, set())]
    if missing:
        raise StructuralViolation(
            f"{len(missing)} intersecting pair(s) share no shift group, first {missing[:5]}"
        )


def _run_groups(instance: FatInstance, graph: IntersectionGraph | None, k: int) -> tuple[set[Edge], dict]:
    if graph is None:
        graph = build_intersection_graph(instance.source or instance.objects)
    builder = _FatBuilder(instance, max(k, 1))
    groups = shift_groups(instance)
    _check_group_cover(graph, groups)
    edges: set[Edge] = set()
    for j, group in enumerate(groups):
        if len(group) < 2:
            continue
        sub, parent = _group_graph(instance, graph, group, j)
        local = builder.three_hop(sub) if k <= 1 else builder.tk_hop(sub, k)
        edges.update(normalize_edge(parent[a], parent[b]) for a, b in local)
    if builder.violations:
        logger.warning(f"hitting sets needed {builder.violations} fallback point(s) for large objects")
    if builder.over_bound:
        logger.warning(f"{builder.over_bound} hitting set(s) exceeded c (2d*)^d points for their level")
    params = {
        "d": instance.dimension,
        "d_star": instance.d_star,
        "group_sizes": [len(g) for g in groups],
        "jitter_seed": get_conf().JITTER_SEED,
        "fatness_violations": builder.violations,
        "hitting_fallbacks": builder.fallbacks,
        "fatness": instance.fatness,
        "fatness_per_level": [instance.fatness_at(depth) for depth in range(max(k, 1))],
        "hitting_over_bound": builder.over_bound,
        "cells_per_level": list(builder.cells),
        "thin_objects": instance.thin_objects,
        "cutoff": get_conf().RECURSION_CUTOFF,
    }
    return edges, params


def fat_spanner_3hop(instance: FatInstance, graph: IntersectionGraph | None = None) -> Spanner:
    """
    3-hop spanner of ``O(n log n)`` size for fat objects.

    Args:
        instance: The rescaled instance.
        graph: Intersection graph of the original objects; built if omitted.

    Returns:
        Spanner: Tagged ``fat-I`` with stretch 3.
    """
    edges, params = _run_groups(instance, graph, 1)
    n = len(instance.objects)
    logger.debug(f"fat-I: n={n} spanner={len(edges)}")
    return Spanner(n, sorted(edges), 3, "fat-I", params)


def fat_spanner_tk(
    instance: FatInstance, k: int, graph: IntersectionGraph | None = None
) -> Spanner:
    """
    ``t_k``-hop spanner with ``t_k = 3 t_{k-1} + 3`` for fat objects.

    Args:
        instance: The rescaled instance.
        k: Level; 1 delegates to :func:`fat_spanner_3hop`.
        graph: Intersection graph of the original objects; built if omitted.

    Returns:
        Spanner: Tagged ``fat-II``.
    """
    if k <= 1:
        return fat_spanner_3hop(instance, graph)
    edges, params = _run_groups(instance, graph, k)
    n = len(instance.objects)
    params["k"] = k
    params["r"] = StretchSchedule(StretchFamily.FAT, k).r(max(1, n))
    logger.debug(f"fat-II k={k}: n={n} spanner={len(edges)}")
    return Spanner(n, sorted(edges), stretch_bound(StretchFamily.FAT, k), "fat-II", params)
