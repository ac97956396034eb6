"""
Hop spanners for string graphs: the 3-hop construction driven by star peeling
and separators, the 7-hop construction on r-divisions, and the recursive
t_k-hop construction over quotient graphs of extended stars.

All three only look at the graph, so the stretch holds for any input graph.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

from django_hopspan.conf import get_conf
from django_hopspan.graph import (
    Edge,
    IntersectionGraph,
    Spanner,
    StarSystem,
    connect_to_stars,
    normalize_edge,
    peel_high_degree_stars,
    quotient_union_graph,
)
from django_hopspan.separator import Division, balanced_separator, r_division, separator_quality
from django_hopspan.stretch import StretchFamily, StretchSchedule, stretch_bound

logger = logging.getLogger(__name__)


def _lift(edges: Iterable[Edge], parent: list[int]) -> set[Edge]:
    return {normalize_edge(parent[u], parent[v]) for u, v in edges}


def _star_edges(stars: StarSystem) -> set[Edge]:
    edges = set()
    for star in stars.stars:
        if star.center is None:
            continue
        for v in star.members:
            if v != star.center:
                edges.add(normalize_edge(star.center, v))
    return edges


def _non_members(graph: IntersectionGraph, stars: StarSystem) -> list[int]:
    owner = stars.star_of()
    return [v for v in range(graph.n) if v not in owner]


def _is_base_case(graph: IntersectionGraph) -> bool:
    return graph.n <= get_conf().RECURSION_CUTOFF or graph.m == 0


@dataclass
class _Trace:
    """
    Separators and divisions met during one build, keyed by depth.

    For ``string-III`` the depth is the construction level, not the recursion
    depth inside a level.
    """

    separators: list[tuple[int, dict]] = field(default_factory=list)
    divisions: list[tuple[int, Division]] = field(default_factory=list)

    def separator_params(self) -> dict:
        top = next((quality for d, quality in self.separators if d == 0), {})
        return {
            "separators": len(self.separators),
            "separator_size": top.get("separator_size", 0),
            "separator_balance": top.get("balance", 0.0),
            "x_over_sqrt_m": top.get("x_over_sqrt_m", 0.0),
        }

    def division_params(self) -> dict:
        depth = max((d for d, _ in self.divisions), default=-1) + 1
        cells = [0] * depth
        for d, division in self.divisions:
            cells[d] += len(division.subsets)
        top = next((division for d, division in self.divisions if d == 0), None)
        return {
            "cells_per_level": cells,
            "boundary_size": len(top.boundary) if top else 0,
            "boundary_complexity": top.boundary_complexity if top else 0,
        }


# Construction I -------------------------------------------------------------


def _three_hop(graph: IntersectionGraph, trace: _Trace | None = None, depth: int = 0) -> set[Edge]:
    if _is_base_case(graph):
        return set(graph.edges())

    delta = StretchSchedule(StretchFamily.STRING, 1).delta(graph.n)
    remainder, stars = peel_high_degree_stars(graph, delta)
    edges = _star_edges(stars)
    edges.update(connect_to_stars(graph, stars, "all_stars"))

    sub, parent = remainder.induced_subgraph(_non_members(graph, stars))
    if sub.m == 0:
        return edges

    sep = balanced_separator(sub)
    if trace is not None:
        trace.separators.append((depth, separator_quality(sub, sep)))
    side_a = sorted(sep.v1 | sep.x)
    side_b = sorted(sep.v2 | sep.x)
    if len(side_a) == sub.n or len(side_b) == sub.n:
        edges.update(_lift(sub.edges(), parent))
        return edges

    for side in (side_a, side_b):
        part, local = sub.induced_subgraph(side)
        inner = _lift(_three_hop(part, trace, depth + 1), local)
        edges.update(_lift(inner, parent))
    return edges


def string_spanner_3hop(graph: IntersectionGraph) -> Spanner:
    """
    3-hop spanner from star peeling at ``delta = n / log^2 n`` plus separator
    recursion on ``V1 + X`` and ``V2 + X``.

    Args:
        graph: Any intersection graph.

    Returns:
        Spanner: Tagged ``string-I`` with stretch 3.
    """
    trace = _Trace()
    edges = _three_hop(graph, trace)
    params = {
        "delta": StretchSchedule(StretchFamily.STRING, 1).delta(graph.n),
        "cutoff": get_conf().RECURSION_CUTOFF,
        **trace.separator_params(),
    }
    logger.debug(f"string-I: n={graph.n} m={graph.m} spanner={len(edges)}")
    return Spanner(graph.n, sorted(edges), 3, "string-I", params)


# Construction II ------------------------------------------------------------


def _star_connections(graph: IntersectionGraph, stars: StarSystem) -> set[Edge]:
    """One shortest (1 or 2 edge) connection per pair of stars, lexicographically least."""
    owner = stars.star_of()
    direct: dict[Edge, tuple[int, int]] = {}
    for u, v in graph.edges():
        su, sv = owner.get(u), owner.get(v)
        if su is None or sv is None or su == sv:
            continue
        path = (u, v) if su < sv else (v, u)
        key = normalize_edge(su, sv)
        if key not in direct or path < direct[key]:
            direct[key] = path

    two_hop: dict[Edge, tuple[int, int, int]] = {}
    for x in range(graph.n):
        nearest: dict[int, int] = {}
        for w in graph.adjacency[x]:
            s = owner.get(w)
            if s is not None and s not in nearest:
                nearest[s] = w
        touched = sorted(nearest)
        for i, s in enumerate(touched):
            for t in touched[i + 1 :]:
                key = (s, t)
                if key in direct:
                    continue
                path = (nearest[s], x, nearest[t])
                if key not in two_hop or path < two_hop[key]:
                    two_hop[key] = path

    edges = {normalize_edge(a, b) for a, b in direct.values()}
    for a, x, b in two_hop.values():
        edges.add(normalize_edge(a, x))
        edges.add(normalize_edge(x, b))
    return edges


def _seven_hop(graph: IntersectionGraph, trace: _Trace | None = None, depth: int = 0) -> set[Edge]:
    if _is_base_case(graph):
        return set(graph.edges())

    n = graph.n
    delta = max(1, math.ceil(math.sqrt(n)))
    r = max(2, math.ceil(n**0.9))
    remainder, stars = peel_high_degree_stars(graph, delta)
    edges = _star_edges(stars)
    outside = _non_members(graph, stars)
    edges.update(connect_to_stars(graph, stars, "one_star", vertices=outside))
    edges.update(_star_connections(graph, stars))

    sub, parent = remainder.induced_subgraph(outside)
    if sub.m == 0:
        return edges
    if r >= sub.n or delta >= r:
        edges.update(_lift(sub.edges(), parent))
        return edges

    division = r_division(sub, r, delta)
    if trace is not None:
        trace.divisions.append((depth, division))
    for subset in division.subsets:
        part, local = sub.induced_subgraph(subset)
        edges.update(_lift(_lift(_seven_hop(part, trace, depth + 1), local), parent))
    return edges


def string_spanner_7hop(graph: IntersectionGraph) -> Spanner:
    """
    7-hop spanner: stars at ``delta = sqrt n``, one assignment edge per outside
    vertex, one short connection per pair of stars, and recursion inside an
    r-division with ``r = n^0.9``.
    """
    trace = _Trace()
    edges = _seven_hop(graph, trace)
    n = max(1, graph.n)
    params = {
        "delta": max(1, math.ceil(math.sqrt(n))),
        "r": max(2, math.ceil(n**0.9)),
        "cutoff": get_conf().RECURSION_CUTOFF,
        **trace.division_params(),
    }
    logger.debug(f"string-II: n={graph.n} m={graph.m} spanner={len(edges)}")
    return Spanner(graph.n, sorted(edges), 7, "string-II", params)


# Construction III -----------------------------------------------------------


def _tk_hop(graph: IntersectionGraph, k: int, trace: _Trace | None = None, depth: int = 0) -> set[Edge]:
    if k < 2:
        return _three_hop(graph)
    if _is_base_case(graph):
        return set(graph.edges())

    schedule = StretchSchedule(StretchFamily.STRING, k)
    delta = schedule.delta(graph.n)
    r = schedule.r(graph.n)

    remainder, stars = peel_high_degree_stars(graph, delta)
    edges = _star_edges(stars)
    outside = _non_members(graph, stars)
    sub, parent = remainder.induced_subgraph(outside)

    if sub.m > 0 and r < sub.n:
        division = r_division(sub, r, delta)
        if trace is not None:
            trace.divisions.append((depth, division))
        boundary = division.boundary
        for subset in division.subsets:
            interior = [v for v in subset if v not in boundary]
            part, local = sub.induced_subgraph(interior)
            edges.update(_lift(_lift(_tk_hop(part, k, trace, depth), local), parent))
        for v in sorted(boundary):
            stars.add(parent[v], [parent[v]])
    elif sub.m > 0:
        # No proper division: the lower level already meets the stretch
        edges.update(_lift(_tk_hop(sub, k - 1, trace, depth + 1), parent))

    outside = _non_members(graph, stars)
    edges.update(connect_to_stars(graph, stars, "one_star", vertices=outside))

    if len(stars.stars) > 1:
        quotient = quotient_union_graph(graph, stars)
        for a, b in _tk_hop(quotient, k - 1, trace, depth + 1):
            edges.add(normalize_edge(*quotient.witnesses[normalize_edge(a, b)]))
    return edges


def string_spanner_tk(graph: IntersectionGraph, k: int) -> Spanner:
    """
    ``t_k``-hop spanner with ``t_k = 5 t_{k-1} + 3``.

    Peeled stars and r-division boundary vertices (as singleton stars) form
    extended stars; their quotient graph is handled one level down and every
    quotient edge is replaced by its witness edge.

    Args:
        graph: Any intersection graph.
        k: Level; below 2 this is the 3-hop construction.

    Returns:
        Spanner: Tagged ``string-III``.
    """
    if k < 2:
        return string_spanner_3hop(graph)
    trace = _Trace()
    edges = _tk_hop(graph, k, trace)
    schedule = StretchSchedule(StretchFamily.STRING, k)
    params = {
        "k": k,
        "delta": schedule.delta(graph.n),
        "r": schedule.r(graph.n),
        "c0": get_conf().STRING_C0,
        "cutoff": get_conf().RECURSION_CUTOFF,
        **trace.division_params(),
    }
    logger.debug(f"string-III k={k}: n={graph.n} m={graph.m} spanner={len(edges)}")
    return Spanner(graph.n, sorted(edges), stretch_bound(StretchFamily.STRING, k), "string-III", params)
