"""
Intersection graphs, spanners, star systems and the hop-stretch verifier.
"""
import heapq
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError, StructuralViolation
from django_hopspan.geometry import GeometricObject, bounding_box, intersects

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class IntersectionGraph:
    """
    Undirected, loop-free graph with sorted adjacency lists.

    ``witnesses`` is only set on quotient graphs and maps each quotient edge
    to the lowest parent-graph edge joining the two groups.
    """

    adjacency: tuple[tuple[int, ...], ...]
    object_ref: tuple[GeometricObject, ...] | None = field(default=None, repr=False, compare=False)
    witnesses: dict[Edge, Edge] | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        object_ref: Sequence[GeometricObject] | None = None,
        witnesses: dict[Edge, Edge] | None = None,
    ) -> "IntersectionGraph":
        neighbors: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) outside vertex range {n}")
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(
            adjacency=tuple(tuple(sorted(s)) for s in neighbors),
            object_ref=tuple(object_ref) if object_ref is not None else None,
            witnesses=witnesses,
        )

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @cached_property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def edges(self) -> list[Edge]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["IntersectionGraph", list[int]]:
        """
        Subgraph induced by ``vertices``, relabelled ``0..k-1`` in increasing order.

        Returns:
            tuple: The subgraph and the local-to-parent vertex list.
        """
        ordered = sorted(set(vertices))
        local = {v: i for i, v in enumerate(ordered)}
        adjacency = tuple(
            tuple(local[w] for w in self.adjacency[v] if w in local) for v in ordered
        )
        objects = None
        if self.object_ref is not None:
            objects = tuple(self.object_ref[v] for v in ordered)
        return IntersectionGraph(adjacency=adjacency, object_ref=objects), ordered

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


@dataclass
class Spanner:
    """
    A spanning subgraph with its declared hop stretch and provenance.

    Edges are stored normalised (``u < v``), deduplicated and sorted.
    """

    n: int
    edges: list[Edge]
    declared_stretch: int
    construction_tag: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.declared_stretch < 1:
            raise InputError(f"declared stretch must be at least 1, got {self.declared_stretch}")
        self.edges = sorted({normalize_edge(int(u), int(v)) for u, v in self.edges})

    def __len__(self) -> int:
        return len(self.edges)

    def check_subgraph(self, graph: IntersectionGraph) -> None:
        """
        Raises:
            StructuralViolation: If an edge is not an edge of ``graph``.
        """
        for u, v in self.edges:
            if u == v or not graph.has_edge(u, v):
                raise StructuralViolation(
                    f"{self.construction_tag} spanner edge ({u}, {v}) is not a graph edge"
                )

    def as_dict(self) -> dict:
        return {
            "t": self.declared_stretch,
            "construction": self.construction_tag,
            "n": self.n,
            "parameters": self.parameters,
            "edges": [list(e) for e in self.edges],
        }


@dataclass(frozen=True)
class Star:
    center: int | None
    members: tuple[int, ...]


@dataclass
class StarSystem:
    """Disjoint stars plus the assignment of outside vertices to one star each."""

    stars: list[Star] = field(default_factory=list)
    assignment: dict[int, int] = field(default_factory=dict)

    def add(self, center: int | None, members: Iterable[int]) -> int:
        self.stars.append(Star(center=center, members=tuple(sorted(members))))
        return len(self.stars) - 1

    def star_of(self) -> dict[int, int]:
        owner: dict[int, int] = {}
        for sid, star in enumerate(self.stars):
            for v in star.members:
                if v in owner:
                    raise StructuralViolation(f"vertex {v} belongs to stars {owner[v]} and {sid}")
                owner[v] = sid
        return owner

    def extended_members(self) -> list[list[int]]:
        groups = [list(star.members) for star in self.stars]
        for v, sid in sorted(self.assignment.items()):
            groups[sid].append(v)
        return [sorted(g) for g in groups]


def build_intersection_graph(objects: Sequence[GeometricObject]) -> IntersectionGraph:
    """
    Build the intersection graph of ``objects``; vertex ``i`` is ``objects[i]``.

    Candidate pairs come from a vectorised bounding-box overlap test and are
    confirmed with the exact predicate.
    """
    n = len(objects)
    if n == 0:
        return IntersectionGraph(adjacency=(), object_ref=())
    d = objects[0].dimension
    if any(u.dimension != d for u in objects):
        raise InputError("all objects must share one dimension")

    boxes = [bounding_box(u) for u in objects]
    lo = np.array([b[0] for b in boxes], dtype=float)
    hi = np.array([b[1] for b in boxes], dtype=float)

    edges = []
    for i in range(n - 1):
        overlap = np.all((lo[i + 1 :] <= hi[i]) & (lo[i] <= hi[i + 1 :]), axis=1)
        for offset in np.flatnonzero(overlap):
            j = i + 1 + int(offset)
            if intersects(objects[i], objects[j]):
                edges.append((i, j))

    graph = IntersectionGraph.from_edges(n, edges, object_ref=objects)
    logger.debug(f"built intersection graph n={n} m={graph.m}")
    return graph


@dataclass
class VerificationReport:
    """
    Outcome of a hop-stretch check.

    ``worst_hops`` is ``t + 1`` when some checked edge has no path of at most
    ``t`` hops; such edges are also counted in ``unreachable``.
    """

    ok: bool
    t: int
    worst_edge: Edge | None
    worst_hops: int
    histogram: dict[int, int]
    unreachable: int
    mode: str
    checked_edges: int
    sample_seed: int | None = None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "t": self.t,
            "worst_edge": list(self.worst_edge) if self.worst_edge else None,
            "worst_hops": self.worst_hops,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "unreachable": self.unreachable,
            "mode": self.mode,
            "checked_edges": self.checked_edges,
            "sample_seed": self.sample_seed,
        }


def verify_hop_spanner(
    graph: IntersectionGraph,
    spanner: Spanner,
    t: int,
    mode: str | None = None,
    sample_fraction: float | None = None,
    seed: int | None = None,
) -> VerificationReport:
    """
    Check that every graph edge is joined by a path of at most ``t`` spanner edges.

    Args:
        graph: The intersection graph.
        spanner: Candidate spanner; must be a subgraph of ``graph``.
        t: Hop bound.
        mode: ``"exact"`` or ``"sampled"``; defaults to exact up to
            ``EXACT_VERIFY_MAX_N`` vertices.
        sample_fraction: Fraction of edges checked in sampled mode.
        seed: Sampling seed.

    Returns:
        VerificationReport: The report.

    Raises:
        StructuralViolation: If the spanner is not a subgraph of ``graph``.
    """
    if t < 1:
        raise InputError(f"hop bound must be at least 1, got {t}")
    spanner.check_subgraph(graph)
    config = get_conf()

    if mode is None:
        mode = "exact" if graph.n <= config.EXACT_VERIFY_MAX_N else "sampled"
    if mode not in ("exact", "sampled"):
        raise InputError(f"unknown verification mode {mode!r}")

    edges = graph.edges()
    sample_seed = None
    if mode == "sampled" and edges:
        sample_seed = config.DEFAULT_SEED if seed is None else seed
        fraction = config.SAMPLED_VERIFY_FRACTION if sample_fraction is None else sample_fraction
        size = min(len(edges), max(1, math.ceil(fraction * len(edges))))
        rng = np.random.default_rng(sample_seed)
        chosen = np.sort(rng.choice(len(edges), size=size, replace=False))
        edges = [edges[i] for i in chosen]

    h = nx.Graph()
    h.add_nodes_from(range(graph.n))
    h.add_edges_from(spanner.edges)

    by_source: dict[int, list[int]] = defaultdict(list)
    for u, v in edges:
        by_source[u].append(v)

    histogram: dict[int, int] = defaultdict(int)
    unreachable = 0
    worst_edge: Edge | None = None
    worst_hops = 0
    for u in sorted(by_source):
        lengths = nx.single_source_shortest_path_length(h, u, cutoff=t)
        for v in by_source[u]:
            hops = lengths.get(v)
            if hops is None:
                unreachable += 1
                hops = t + 1
            else:
                histogram[hops] += 1
            if hops > worst_hops:
                worst_hops, worst_edge = hops, (u, v)

    report = VerificationReport(
        ok=unreachable == 0,
        t=t,
        worst_edge=worst_edge,
        worst_hops=worst_hops,
        histogram=dict(histogram),
        unreachable=unreachable,
        mode=mode,
        checked_edges=len(edges),
        sample_seed=sample_seed,
    )
    if not report.ok:
        logger.warning(
            f"{spanner.construction_tag}: {unreachable} edge(s) need more than {t} hops, "
            f"first {worst_edge}"
        )
    return report


def peel_high_degree_stars(
    graph: IntersectionGraph, delta: int
) -> tuple[IntersectionGraph, StarSystem]:
    """
    Repeatedly remove a maximum-degree vertex of degree above ``delta`` with its
    current neighbourhood, recording each removal as a star.

    Args:
        graph: The graph to peel.
        delta: Degree threshold.

    Returns:
        tuple: The remainder ``G'`` on the same vertex set (peeled vertices
        isolated) and the star system.
    """
    delta = max(0, int(delta))
    alive = [True] * graph.n
    degree = [graph.degree(v) for v in range(graph.n)]
    heap = [(-degree[v], v) for v in range(graph.n)]
    heapq.heapify(heap)
    stars = StarSystem()

    while heap:
        neg, v = heapq.heappop(heap)
        if not alive[v] or -neg != degree[v]:
            continue
        if degree[v] <= delta:
            break
        members = [v] + [w for w in graph.adjacency[v] if alive[w]]
        stars.add(v, members)
        for w in members:
            alive[w] = False
        for w in members:
            for x in graph.adjacency[w]:
                if alive[x]:
                    degree[x] -= 1
                    heapq.heappush(heap, (-degree[x], x))

    remainder = IntersectionGraph.from_edges(
        graph.n,
        ((u, v) for u, v in graph.edges() if alive[u] and alive[v]),
        object_ref=graph.object_ref,
    )
    logger.debug(f"peeled {len(stars.stars)} stars at delta={delta}, max degree left {remainder.max_degree}")
    return remainder, stars


def connect_to_stars(
    graph: IntersectionGraph,
    stars: StarSystem,
    mode: str,
    vertices: Iterable[int] | None = None,
) -> list[Edge]:
    """
    Connect vertices to the stars they touch.

    In ``all_stars`` mode each vertex gets one edge per touched star (to its
    lowest-indexed neighbour there), skipping its own star. In ``one_star``
    mode each non-member gets a single edge to its lowest-indexed star
    neighbour and is recorded in ``stars.assignment``.

    Args:
        graph: The graph the stars were peeled from.
        stars: The star system; updated in ``one_star`` mode.
        mode: ``"all_stars"`` or ``"one_star"``.
        vertices: Vertices to connect; defaults to all.

    Returns:
        list: The added edges.
    """
    if mode not in ("all_stars", "one_star"):
        raise InputError(f"unknown star connection mode {mode!r}")
    owner = stars.star_of()
    targets = range(graph.n) if vertices is None else sorted(set(vertices))
    edges: list[Edge] = []

    for u in targets:
        own = owner.get(u)
        if mode == "one_star":
            if own is not None:
                continue
            for w in graph.adjacency[u]:
                if w in owner:
                    edges.append(normalize_edge(u, w))
                    stars.assignment[u] = owner[w]
                    break
            continue

        seen: set[int] = set()
        for w in graph.adjacency[u]:
            sid = owner.get(w)
            if sid is None or sid == own or sid in seen:
                continue
            seen.add(sid)
            edges.append(normalize_edge(u, w))
    return edges


def quotient_union_graph(graph: IntersectionGraph, stars: StarSystem) -> IntersectionGraph:
    """
    Contract every extended star to a single vertex.

    Two contracted vertices are adjacent iff some graph edge joins their
    groups; the lowest such edge is kept as the witness.

    Raises:
        StructuralViolation: If a vertex lies in two extended stars.
    """
    group_of: dict[int, int] = {}
    for sid, members in enumerate(stars.extended_members()):
        for v in members:
            if v in group_of:
                raise StructuralViolation(
                    f"vertex {v} lies in extended stars {group_of[v]} and {sid}"
                )
            group_of[v] = sid

    witnesses: dict[Edge, Edge] = {}
    for u, v in graph.edges():
        a, b = group_of.get(u), group_of.get(v)
        if a is None or b is None or a == b:
            continue
        key = normalize_edge(a, b)
        if key not in witnesses:
            witnesses[key] = (u, v)

    return IntersectionGraph.from_edges(len(stars.stars), witnesses.keys(), witnesses=witnesses)
