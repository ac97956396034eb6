"""
Balanced vertex separators and r-divisions.

The separator works in stages: split along connected components, then try a
single cut vertex, then cut a breadth-first layer started from a
pseudo-peripheral vertex. Balance and the absence of V1-V2 edges are hard
guarantees; the separator size is only kept small.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from django_hopspan.exceptions import PreconditionError, StructuralViolation
from django_hopspan.graph import IntersectionGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeparatorResult:
    v1: frozenset[int]
    v2: frozenset[int]
    x: frozenset[int]


@dataclass
class Division:
    """Covering of the vertex set by subsets of size at most ``r``."""

    subsets: list[tuple[int, ...]]
    boundary: frozenset[int]
    r: int
    n: int = 0
    fallbacks: int = field(default=0, compare=False)

    @property
    def boundary_complexity(self) -> int:
        return sum(len(s) for s in self.subsets) - self.n


def balance_bound(n: int) -> int:
    return math.ceil(2 * n / 3)


def _bin(pieces: list[list[int]], n: int) -> tuple[set[int], set[int]] | None:
    """Place whole pieces on two sides so that both stay within ``ceil(2n/3)``."""
    bound = balance_bound(n)
    pieces = sorted((p for p in pieces if p), key=lambda p: (-len(p), min(p)))
    if not pieces:
        return set(), set()
    if len(pieces[0]) > bound:
        return None

    total = sum(len(p) for p in pieces)
    if 3 * len(pieces[0]) > n and total - len(pieces[0]) <= bound:
        return set(pieces[0]), {v for p in pieces[1:] for v in p}

    side1: set[int] = set()
    side2: set[int] = set()
    for piece in pieces:
        if len(side1) <= len(side2):
            side1.update(piece)
        else:
            side2.update(piece)
    if len(side1) <= bound and len(side2) <= bound:
        return side1, side2
    return None


def _components(graph: nx.Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    sub = graph if vertices is None else graph.subgraph(vertices)
    return sorted((sorted(c) for c in nx.connected_components(sub)), key=lambda c: c[0])


def _farthest(graph: nx.Graph, source: int) -> tuple[int, dict[int, int]]:
    lengths = nx.single_source_shortest_path_length(graph, source)
    far = max(lengths.values())
    return min(v for v, dist in lengths.items() if dist == far), lengths


def _pseudo_peripheral(graph: nx.Graph, start: int) -> dict[int, int]:
    """BFS distances from a vertex found by two farthest-vertex sweeps."""
    vertex, _ = _farthest(graph, start)
    vertex, _ = _farthest(graph, vertex)
    return nx.single_source_shortest_path_length(graph, vertex)


def _refine(
    graph: nx.Graph, v1: set[int], v2: set[int], x: set[int], bound: int
) -> tuple[set[int], set[int], set[int]]:
    """Move separator vertices into a side whenever no V1-V2 edge appears."""
    for v in sorted(x):
        nbrs = set(graph.adj[v])
        if not nbrs & v2 and len(v1) < bound:
            x.discard(v)
            v1.add(v)
        elif not nbrs & v1 and len(v2) < bound:
            x.discard(v)
            v2.add(v)
    return v1, v2, x


def _cut_vertex_split(
    graph: nx.Graph, component: list[int], others: list[list[int]], n: int
) -> tuple[set[int], set[int], set[int]] | None:
    sub = graph.subgraph(component)
    best = None
    for a in sorted(nx.articulation_points(sub)):
        pieces = _components(sub, [v for v in component if v != a]) + others
        binned = _bin(pieces, n)
        if binned is None:
            continue
        score = max(len(binned[0]), len(binned[1]))
        if best is None or score < best[0]:
            best = (score, binned, a)
    if best is None:
        return None
    _, (v1, v2), a = best
    return v1, v2, {a}


def _layer_split(
    graph: nx.Graph, component: list[int], others: list[list[int]], n: int
) -> tuple[set[int], set[int], set[int]]:
    sub = graph.subgraph(component)
    dist = _pseudo_peripheral(sub, component[0])
    height = max(dist.values())
    layers: list[list[int]] = [[] for _ in range(height + 1)]
    for v in sorted(dist):
        layers[dist[v]].append(v)

    best = None
    for i in range(height + 1):
        below = [v for layer in layers[:i] for v in layer]
        above = [v for layer in layers[i + 1 :] for v in layer]
        binned = _bin([below, above] + others, n)
        if binned is None:
            continue
        if best is None or len(layers[i]) < best[0]:
            best = (len(layers[i]), binned, set(layers[i]))
    if best is not None:
        _, (v1, v2), x = best
        return v1, v2, x

    # Widen a window of layers around the median until the sides balance
    logger.debug(f"no single layer balances {len(component)} vertices; widening")
    cumulative = 0
    median = 0
    for i, layer in enumerate(layers):
        cumulative += len(layer)
        if 2 * cumulative >= len(component):
            median = i
            break
    lo_layer, hi_layer = median, median
    while True:
        below = [v for layer in layers[:lo_layer] for v in layer]
        above = [v for layer in layers[hi_layer + 1 :] for v in layer]
        binned = _bin([below, above] + others, n)
        if binned is not None:
            x = {v for layer in layers[lo_layer : hi_layer + 1] for v in layer}
            return binned[0], binned[1], x
        if lo_layer == 0 and hi_layer == height:
            # The whole component as separator always balances the rest
            binned = _bin(others, n) or ({v for p in others for v in p}, set())
            return binned[0], binned[1], set(component)
        if (len(below) >= len(above) and lo_layer > 0) or hi_layer == height:
            lo_layer -= 1
        else:
            hi_layer += 1


def balanced_separator(graph: IntersectionGraph) -> SeparatorResult:
    """
    Partition the vertices into ``V1, V2, X`` with no ``V1``-``V2`` edge and
    ``|V1|, |V2| <= ceil(2n/3)``.

    Args:
        graph: The graph to separate.

    Returns:
        SeparatorResult: The partition.
    """
    n = graph.n
    if n == 0:
        return SeparatorResult(frozenset(), frozenset(), frozenset())
    bound = balance_bound(n)
    if n <= bound:
        return SeparatorResult(frozenset(range(n)), frozenset(), frozenset())

    g = graph.to_networkx()
    components = _components(g)
    binned = _bin(components, n)
    if binned is not None:
        return SeparatorResult(frozenset(binned[0]), frozenset(binned[1]), frozenset())

    big = max(components, key=len)
    others = [c for c in components if c is not big]

    split = _cut_vertex_split(g, big, others, n)
    if split is None:
        split = _layer_split(g, big, others, n)
    v1, v2, x = _refine(g, *split, bound)
    if len(v1) < len(v2) or (len(v1) == len(v2) and min(v2, default=n) < min(v1, default=n)):
        v1, v2 = v2, v1
    return SeparatorResult(frozenset(v1), frozenset(v2), frozenset(x))


def validate_separator(graph: IntersectionGraph, result: SeparatorResult) -> None:
    """
    Raises:
        StructuralViolation: If the result is not a balanced separation.
    """
    parts = (result.v1, result.v2, result.x)
    if sum(len(p) for p in parts) != graph.n or set().union(*parts) != set(range(graph.n)):
        raise StructuralViolation("separator sets do not partition the vertices")
    bound = balance_bound(graph.n)
    if len(result.v1) > bound or len(result.v2) > bound:
        raise StructuralViolation(
            f"separator sides {len(result.v1)}/{len(result.v2)} exceed {bound}"
        )
    for u, v in graph.edges():
        if (u in result.v1 and v in result.v2) or (u in result.v2 and v in result.v1):
            raise StructuralViolation(f"edge ({u}, {v}) crosses the separator")


def separator_quality(graph: IntersectionGraph, result: SeparatorResult) -> dict:
    """
    Size and balance of one separation.

    ``balance`` is the larger side over ``n``; ``x_over_sqrt_m`` is ``|X| / sqrt(m)``
    and 0 for an edgeless graph.
    """
    n, m = graph.n, graph.m
    return {
        "n": n,
        "m": m,
        "separator_size": len(result.x),
        "balance": max(len(result.v1), len(result.v2)) / n if n else 0.0,
        "x_over_sqrt_m": len(result.x) / math.sqrt(m) if m else 0.0,
    }


def _forward_chunks(graph: IntersectionGraph, vertices: list[int], r: int, delta: int) -> list[list[int]]:
    """Cover the edges of ``vertices`` by chunks plus their forward neighbourhoods."""
    inside = set(vertices)
    size = max(1, r // (delta + 1))
    chunks = []
    for start in range(0, len(vertices), size):
        chunk = vertices[start : start + size]
        members = set(chunk)
        for v in chunk:
            members.update(w for w in graph.adjacency[v] if w > v and w in inside)
        chunks.append(sorted(members))
    return chunks


def r_division(graph: IntersectionGraph, r: int, delta: int) -> Division:
    """
    Cover the vertices by subsets of at most ``r`` vertices so that every edge
    lies inside a subset.

    Separators are applied recursively with ``X`` copied into both sides.

    Args:
        graph: Graph with maximum degree at most ``delta``.
        r: Subset capacity, at least 2.
        delta: Degree bound.

    Returns:
        Division: The subsets and the boundary vertices.

    Raises:
        PreconditionError: If the degree bound is violated or ``r < 2``.
    """
    if r < 2:
        raise PreconditionError(f"r-division needs r >= 2, got {r}")
    if graph.max_degree > delta:
        raise PreconditionError(
            f"maximum degree {graph.max_degree} exceeds the division bound {delta}"
        )

    subsets: list[tuple[int, ...]] = []
    fallbacks = 0
    stack = [list(range(graph.n))]
    while stack:
        vertices = stack.pop()
        if len(vertices) <= r:
            if vertices:
                subsets.append(tuple(vertices))
            continue
        sub, parent = graph.induced_subgraph(vertices)
        sep = balanced_separator(sub)
        side_a = sorted(parent[v] for v in sep.v1 | sep.x)
        side_b = sorted(parent[v] for v in sep.v2 | sep.x)
        if len(side_a) < len(vertices) and len(side_b) < len(vertices):
            stack.append(side_b)
            stack.append(side_a)
            continue
        if delta + 1 > r:
            raise PreconditionError(f"no progress possible with r={r} and delta={delta}")
        fallbacks += 1
        for chunk in reversed(_forward_chunks(graph, vertices, r, delta)):
            stack.append(chunk)

    subsets.sort()
    counts: dict[int, int] = {}
    for subset in subsets:
        for v in subset:
            counts[v] = counts.get(v, 0) + 1
    boundary = frozenset(v for v, c in counts.items() if c >= 2)
    if fallbacks:
        logger.warning(f"r-division used the chunked fallback {fallbacks} time(s)")
    return Division(subsets=subsets, boundary=boundary, r=r, n=graph.n, fallbacks=fallbacks)


def validate_division(graph: IntersectionGraph, division: Division) -> None:
    """
    Raises:
        StructuralViolation: If a subset is too large, a vertex or edge is not
            covered, or the boundary is wrong.
    """
    counts: dict[int, int] = {}
    for subset in division.subsets:
        if len(subset) > division.r:
            raise StructuralViolation(f"subset of size {len(subset)} exceeds r={division.r}")
        for v in subset:
            counts[v] = counts.get(v, 0) + 1
    if set(counts) != set(range(graph.n)):
        raise StructuralViolation("division does not cover every vertex")
    if division.boundary != frozenset(v for v, c in counts.items() if c >= 2):
        raise StructuralViolation("boundary differs from the vertices shared by subsets")
    memberships: dict[int, set[int]] = {}
    for i, subset in enumerate(division.subsets):
        for v in subset:
            memberships.setdefault(v, set()).add(i)
    for u, v in graph.edges():
        if not memberships[u] & memberships[v]:
            raise StructuralViolation(f"edge ({u}, {v}) lies in no subset")
