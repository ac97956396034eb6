"""
Core services: dispatch from construction tags to builders, and the
build-then-check flow shared by the commands and the runner.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from django_hopspan.constructions.fat import FatInstance, fat_spanner_3hop, fat_spanner_tk
from django_hopspan.constructions.rectangles import rect_spanner, seg_line_spanner, seg_spanner
from django_hopspan.constructions.strings import (
    string_spanner_3hop,
    string_spanner_7hop,
    string_spanner_tk,
)
from django_hopspan.constructions.union import two_hop_spanner_union
from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject
from django_hopspan.graph import (
    IntersectionGraph,
    Spanner,
    VerificationReport,
    build_intersection_graph,
    verify_hop_spanner,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstructionEntry:
    tag: str
    builder: Callable[..., Spanner]
    needs_k: bool = False
    default_k: int | None = None


def _string_i(objects, graph, k, seed):
    return string_spanner_3hop(graph)


def _string_ii(objects, graph, k, seed):
    return string_spanner_7hop(graph)


def _string_iii(objects, graph, k, seed):
    return string_spanner_tk(graph, k)


def _fat_i(objects, graph, k, seed):
    return fat_spanner_3hop(FatInstance.from_objects(objects), graph)


def _fat_ii(objects, graph, k, seed):
    return fat_spanner_tk(FatInstance.from_objects(objects), k, graph)


def _union(objects, graph, k, seed):
    return two_hop_spanner_union(objects, graph, seed=seed)


def _seg_line(objects, graph, k, seed):
    return seg_line_spanner(objects)


def _seg(objects, graph, k, seed):
    return seg_spanner(objects)


def _rect(objects, graph, k, seed):
    return rect_spanner(objects)


CONSTRUCTIONS: dict[str, ConstructionEntry] = {
    entry.tag: entry
    for entry in (
        ConstructionEntry("string-I", _string_i),
        ConstructionEntry("string-II", _string_ii),
        ConstructionEntry("string-III", _string_iii, needs_k=True, default_k=2),
        ConstructionEntry("fat-I", _fat_i),
        ConstructionEntry("fat-II", _fat_ii, needs_k=True, default_k=2),
        ConstructionEntry("union-2hop", _union),
        ConstructionEntry("seg-line", _seg_line),
        ConstructionEntry("seg", _seg),
        ConstructionEntry("rect", _rect),
    )
}


def get_construction(tag: str) -> ConstructionEntry:
    try:
        return CONSTRUCTIONS[tag]
    except KeyError:
        known = ", ".join(sorted(CONSTRUCTIONS))
        raise InputError(f"unknown construction {tag!r}; expected one of {known}") from None


def build_spanner(
    objects: Sequence[GeometricObject],
    tag: str,
    k: int | None = None,
    graph: IntersectionGraph | None = None,
    seed: int | None = None,
) -> tuple[IntersectionGraph, Spanner]:
    """
    Build the intersection graph (unless given) and the spanner named by ``tag``.

    The result is checked to be a subgraph before it is returned.

    Args:
        objects: The instance.
        tag: Construction tag, e.g. ``"string-III"``.
        k: Level for the recursive constructions.
        graph: Precomputed intersection graph.
        seed: Seed for randomised constructions.

    Returns:
        tuple: ``(graph, spanner)``.

    Raises:
        InputError: Unknown tag, or objects the construction does not take.
        StructuralViolation: If the spanner is not a subgraph.
    """
    entry = get_construction(tag)
    if entry.needs_k:
        k = entry.default_k if k is None else int(k)
    objects = list(objects)
    if graph is None:
        graph = build_intersection_graph(objects)
    spanner = entry.builder(objects, graph, k, seed)
    spanner.check_subgraph(graph)
    logger.info(
        f"{tag}: n={graph.n} m={graph.m} edges={len(spanner)} t={spanner.declared_stretch}"
    )
    return graph, spanner


def check_spanner(
    graph: IntersectionGraph,
    spanner: Spanner,
    t: int | None = None,
    mode: str | None = None,
    seed: int | None = None,
) -> VerificationReport:
    """Hop-stretch verification at ``t``, the declared stretch unless given."""
    t = spanner.declared_stretch if t is None else int(t)
    return verify_hop_spanner(graph, spanner, t, mode=mode, seed=seed)
