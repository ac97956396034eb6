"""
Tests for shallow cuttings and the 2-hop spanner of disks and boxes.
"""
import math
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase, override_settings

from django_hopspan.conf import reset_config
from django_hopspan.constructions.union import (
    ShallowCuttingLevel,
    grid_probes,
    intersection_witness,
    lens_corners,
    probe_depths,
    shallow_cutting,
    touches_only,
    two_hop_spanner_union,
)
from django_hopspan.exceptions import InputError, ShallowCuttingError, StructuralViolation
from django_hopspan.geometry import GeometricObject, contains_point
from django_hopspan.graph import build_intersection_graph
from django_hopspan.harness.generators import generate_instance
from django_hopspan.services import check_spanner


class WitnessTest(SimpleTestCase):
    """Test intersection witnesses."""

    def test_witness_lies_in_both_objects(self):
        """Test witnesses for disk-disk, box-box and disk-box pairs."""
        pairs = [
            (GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.5, 0, 1)),
            (GeometricObject.rect(0, 0, 2, 2), GeometricObject.rect(1, 1, 3, 3)),
            (GeometricObject.disk(0, 0, 1), GeometricObject.rect(0.5, -0.2, 3, 0.2)),
            (GeometricObject.disk(0, 0, 1), GeometricObject.disk(2, 0, 1)),
        ]
        for a, b in pairs:
            point = intersection_witness(a, b)
            self.assertTrue(contains_point(a, point) and contains_point(b, point), (a, b, point))

    def test_concentric_disks(self):
        """Test that equal centres give the centre."""
        point = intersection_witness(GeometricObject.disk(1, 1, 1), GeometricObject.disk(1, 1, 2))
        self.assertEqual(point, (1.0, 1.0))

    def test_disk_box_witness_is_interior(self):
        """Test that a disk meeting a box from outside gets a point off the box boundary."""
        disk, box = GeometricObject.disk(0, 0, 1), GeometricObject.rect(0.5, -0.2, 3, 0.2)
        point = intersection_witness(disk, box)
        self.assertGreater(point[0], 0.5)
        self.assertLess(math.hypot(*point), 1.0)

    def test_touches_only(self):
        """Test boundary-only contact for each pair of kinds."""
        self.assertTrue(touches_only(GeometricObject.disk(0, 0, 1), GeometricObject.disk(2, 0, 1)))
        self.assertFalse(touches_only(GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.5, 0, 1)))
        self.assertTrue(touches_only(GeometricObject.rect(0, 0, 1, 1), GeometricObject.rect(1, 0, 2, 1)))
        self.assertFalse(touches_only(GeometricObject.rect(0, 0, 1, 1), GeometricObject.rect(0.5, 0.5, 2, 2)))
        self.assertTrue(touches_only(GeometricObject.disk(0, 0, 1), GeometricObject.rect(1, -1, 2, 1)))
        self.assertFalse(touches_only(GeometricObject.disk(0, 0, 1), GeometricObject.rect(0.5, -1, 2, 1)))
        self.assertFalse(touches_only(GeometricObject.disk(0, 0, 1), GeometricObject.rect(-0.1, -0.1, 0.1, 0.1)))

    def test_lens_corners(self):
        """Test that both corner points lie strictly inside both disks."""
        a, b = GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.2, 0.3, 0.8)
        corners = lens_corners(a, b)
        self.assertEqual(len(corners), 2)
        for point in corners:
            self.assertLess(math.dist(point, a.center), a.radius)
            self.assertLess(math.dist(point, b.center), b.radius)
        self.assertEqual(lens_corners(a, GeometricObject.disk(0.1, 0, 0.5)), [])
        self.assertEqual(lens_corners(a, GeometricObject.disk(2, 0, 1)), [])


class ShallowCuttingTest(SimpleTestCase):
    """Test a single shallow-cutting level."""

    def setUp(self):
        reset_config()

    def test_crossing_bound_and_coverage(self):
        """Test that cells respect floor(n / r) and cover all shallow grid probes."""
        objects = generate_instance("disks", 60, seed=1)
        level = shallow_cutting(objects, k=8, r=4, seed=3)
        self.assertEqual(level.crossing_limit, math.floor(60 / 4))
        self.assertLessEqual(level.max_crossing, level.crossing_limit)
        self.assertEqual(level.covered_probes, level.probes)

    def test_cells_are_shallow(self):
        """Test that no retained cell lies inside more than k objects."""
        objects = generate_instance("rects", 50, seed=2)
        level = shallow_cutting(objects, k=4, r=2, seed=4)
        for cell in level.cells:
            self.assertLessEqual(len(cell.containing), 4)

    def test_diagnostics_keys(self):
        """Test the reported bookkeeping."""
        level = shallow_cutting(generate_instance("disks", 20, seed=5), k=2, r=2, level=3)
        diagnostics = level.diagnostics()
        self.assertEqual(diagnostics["i"], 3)
        for key in ("cells", "max_crossing", "dropped", "rounds", "probes", "covered_probes"):
            self.assertIn(key, diagnostics)

    def test_probe_depths(self):
        """Test probe depth against direct counting."""
        objects = generate_instance("disks", 15, seed=6)
        probes = grid_probes(objects, size=10)
        depths = probe_depths(objects, probes)
        for p, value in zip(probes[:25], depths[:25]):
            self.assertEqual(value, sum(contains_point(u, p) for u in objects))

    def test_bad_arguments(self):
        """Test the argument and object checks."""
        disks = generate_instance("disks", 5, seed=7)
        with self.assertRaises(InputError):
            shallow_cutting(disks, k=0, r=1)
        with self.assertRaises(InputError):
            shallow_cutting(generate_instance("hv_segments", 5, seed=7), k=1, r=1)

    def test_empty_input(self):
        """Test that no objects give no cells."""
        self.assertEqual(shallow_cutting([], k=1, r=1).cells, [])


@override_settings(HOPSPAN={"SHALLOW_MAX_DEPTH": 1, "SHALLOW_MAX_ROUNDS": 1})
class ShallowCuttingLimitTest(SimpleTestCase):
    """Test points that refinement cannot resolve."""

    def setUp(self):
        reset_config()
        self.objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.5, 0, 1)]
        self.probes = np.array([[0.75, 0.1]])

    def tearDown(self):
        reset_config()

    def test_touching_witness_may_stay_uncovered(self):
        """Test that an unresolved point in the soft mask is counted, not raised."""
        level = shallow_cutting(self.objects, k=2, r=4, probes=self.probes, soft_mask=np.array([True]))
        self.assertEqual(level.unresolved_pairs, 1)
        self.assertEqual(level.covered_probes, 0)

    def test_unresolved_point_raises(self):
        """Test that an uncovered point outside the soft mask raises with diagnostics."""
        with self.assertRaises(ShallowCuttingError) as ctx:
            shallow_cutting(self.objects, k=2, r=4, probes=self.probes)
        self.assertEqual(ctx.exception.diagnostics["uncovered_probes"], [[0.75, 0.1]])


class TwoHopUnionTest(SimpleTestCase):
    """Test the 2-hop spanner."""

    def setUp(self):
        reset_config()

    def check(self, objects, seed=0):
        graph = build_intersection_graph(objects)
        spanner = two_hop_spanner_union(objects, graph, seed=seed)
        spanner.check_subgraph(graph)
        report = check_spanner(graph, spanner, mode="exact")
        self.assertTrue(report.ok, f"worst edge {report.worst_edge}")
        return graph, spanner

    def test_disks(self):
        """Test stretch 2 on random disks."""
        _, spanner = self.check(generate_instance("disks", 80, seed=1))
        self.assertEqual((spanner.declared_stretch, spanner.construction_tag), (2, "union-2hop"))
        self.assertEqual(len(spanner.parameters["levels"]), (80).bit_length())
        cells = spanner.parameters["cells_per_level"]
        self.assertEqual(cells, [level["cells"] for level in spanner.parameters["levels"]])

    def test_rectangles(self):
        """Test stretch 2 on random rectangles."""
        self.check(generate_instance("rects", 70, seed=2))

    def test_clique_uses_stars(self):
        """Test that K_n through one point is served by stars."""
        graph, spanner = self.check(generate_instance("clique_point", 50, seed=3))
        self.assertGreater(spanner.parameters["stars"], 0)
        self.assertLess(len(spanner), graph.m)

    def test_crossing_limits_per_level(self):
        """Test that every level stays within its crossing limit."""
        _, spanner = self.check(generate_instance("disks", 60, seed=4))
        for level in spanner.parameters["levels"]:
            self.assertLessEqual(level["max_crossing"], level["crossing_limit"])

    def test_tangent_pair(self):
        """Test that touching disks stay connected."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(2, 0, 1)]
        _, spanner = self.check(objects)
        self.assertEqual(spanner.edges, [(0, 1)])

    def test_no_edges(self):
        """Test that disjoint objects give the empty spanner."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(5, 0, 1)]
        spanner = two_hop_spanner_union(objects, seed=9)
        self.assertEqual(spanner.edges, [])
        self.assertEqual(spanner.parameters, {"levels": [], "degenerate_edges": 0, "seed": 9})

    def test_seeded(self):
        """Test that the same seed gives the same spanner."""
        objects = generate_instance("disks", 40, seed=5)
        first = two_hop_spanner_union(objects, seed=11)
        second = two_hop_spanner_union(objects, seed=11)
        self.assertEqual(first.edges, second.edges)

    def test_rejects_segments(self):
        """Test that segments are not accepted."""
        with self.assertRaises(InputError):
            two_hop_spanner_union(generate_instance("hv_segments", 10, seed=6))

    def test_depth_array_is_integral(self):
        """Test the probe depth dtype used for comparisons."""
        objects = generate_instance("disks", 5, seed=8)
        self.assertEqual(probe_depths(objects, np.zeros((1, 2))).dtype, np.int64)

    def test_disks_and_boxes_together(self):
        """Test stretch 2 when disks and rectangles meet."""
        self.check(generate_instance("disks", 40, seed=12) + generate_instance("rects", 40, seed=13))

    def test_lens_corners_for_crossing_disks(self):
        """Test that crossing disks add two probes per pair."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.5, 0, 1)]
        _, spanner = self.check(objects)
        self.assertEqual(spanner.parameters["corner_probes"], 2)
        self.assertEqual(spanner.parameters["degenerate_edges"], 0)


def empty_level(objects, k, r, **kwargs):
    return ShallowCuttingLevel(i=kwargs.get("level", 0), k=k, r=r)


class UncoveredPairTest(SimpleTestCase):
    """Test pairs that end up in no common star."""

    def setUp(self):
        reset_config()

    @patch("django_hopspan.constructions.union.shallow_cutting", side_effect=empty_level)
    def test_overlapping_pair_raises(self, _):
        """Test that an overlapping pair without a star is an error."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(1.5, 0, 1)]
        with self.assertRaises(StructuralViolation):
            two_hop_spanner_union(objects)

    @patch("django_hopspan.constructions.union.shallow_cutting", side_effect=empty_level)
    def test_touching_pair_is_kept(self, _):
        """Test that a pair touching on the boundary becomes a direct edge."""
        objects = [GeometricObject.rect(0, 0, 1, 1), GeometricObject.rect(1, 0, 2, 1)]
        spanner = two_hop_spanner_union(objects)
        self.assertEqual(spanner.edges, [(0, 1)])
        self.assertEqual(spanner.parameters["degenerate_edges"], 1)
