"""
Tests for the fat-object constructions.
"""
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings
from hypothesis import strategies as st

from django_hopspan.conf import reset_config
from django_hopspan.constructions.fat import (
    FatInstance,
    boundary_hitting_set,
    fat_spanner_3hop,
    fat_spanner_tk,
    measured_fatness,
    shift_groups,
)
from django_hopspan.exceptions import InputError, StructuralViolation
from django_hopspan.geometry import GeometricObject, contains_points
from django_hopspan.graph import build_intersection_graph
from django_hopspan.harness.generators import generate_instance
from django_hopspan.quadtree import QuadtreeCell
from django_hopspan.services import check_spanner

# Integer rectangles where a zero width or height is common
int_rects = st.builds(
    lambda x, y, w, h: GeometricObject.rect(x, y, x + w, y + h),
    st.integers(0, 8),
    st.integers(0, 8),
    st.integers(0, 3),
    st.integers(0, 3),
)


def degenerate_rects():
    """Twelve integer rectangles, most of them without area, plus a point."""
    objects = [
        GeometricObject.rect(x, y, x + (i % 3), y + (i // 3) % 3)
        for i, (x, y) in enumerate(((i * 3) % 7, (i * 5) % 6) for i in range(12))
    ]
    return objects + [GeometricObject.rect(3, 3, 3, 3)]


class FatInstanceTest(SimpleTestCase):
    """Test instance preparation and shift groups."""

    def test_rejects_strings(self):
        """Test that polylines have no hitting rule."""
        with self.assertRaises(InputError):
            FatInstance.from_objects(generate_instance("polylines", 5, seed=1))

    def test_rejects_mixed_dimensions(self):
        """Test that a disk and a 3-ball cannot share an instance."""
        with self.assertRaises(InputError):
            FatInstance.from_objects([GeometricObject.disk(0, 0, 1), GeometricObject.ball((0, 0, 0), 1)])

    def test_parameters(self):
        """Test d* = 2d + 1 and the alignment constant."""
        instance = FatInstance.from_objects(generate_instance("balls_d", 10, {"d": 3}, seed=2))
        self.assertEqual(instance.d_star, 7)
        self.assertEqual(instance.alignment, 14)

    def test_every_object_is_in_most_groups(self):
        """Test that each object misses at most d of the d* groups."""
        instance = FatInstance.from_objects(generate_instance("squares", 120, seed=3))
        groups = shift_groups(instance)
        self.assertEqual(len(groups), 5)
        for i in range(120):
            self.assertGreaterEqual(sum(i in g for g in groups), 3)

    def test_point_joins_every_group(self):
        """Test that a zero-size rectangle counts as aligned under every shift."""
        objects = [
            GeometricObject.rect(2, 3, 5, 6),
            GeometricObject.rect(0, 0, 1, 1),
            GeometricObject.rect(6, 6, 8, 8),
            GeometricObject.rect(1, 4, 3, 5),
            GeometricObject.rect(3, 3, 3, 3),
        ]
        groups = shift_groups(FatInstance.from_objects(objects))
        self.assertTrue(all(4 in g for g in groups))

    def test_measured_fatness(self):
        """Test the per-kind hitting constants."""
        self.assertEqual(measured_fatness([GeometricObject.disk(0, 0, 1)]), (36.0, 0))
        self.assertEqual(measured_fatness([GeometricObject.rect(0, 0, 1, 1)]), (16.0, 0))
        self.assertEqual(measured_fatness([GeometricObject.rect(0, 0, 2, 1)]), (49.0, 0))
        self.assertEqual(measured_fatness([GeometricObject.ball((0, 0, 0), 1)]), (343.0, 0))

    def test_thin_boxes_are_counted(self):
        """Test that a box without area adds no finite constant."""
        c, thin = measured_fatness([GeometricObject.rect(0, 0, 2, 0), GeometricObject.rect(1, 1, 1, 1)])
        self.assertEqual((c, thin), (1.0, 1))

    def test_fatness_grows_per_level(self):
        """Test that star unions one level down are 4^d times fatter."""
        instance = FatInstance.from_objects(generate_instance("squares", 10, seed=2))
        self.assertEqual(instance.fatness, 16.0)
        self.assertEqual(instance.fatness_at(1), 256.0)
        self.assertEqual(instance.hitting_bound(0), 16.0 * 10**2)


class HittingSetTest(SimpleTestCase):
    """Test boundary hitting sets."""

    def test_hits_every_crossing_object(self):
        """Test that every target contains a hitting point."""
        instance = FatInstance.from_objects(generate_instance("disks", 80, seed=4))
        cell = QuadtreeCell(1, (0, 0))
        hitting = boundary_hitting_set(cell, instance.objects, instance.d_star)
        self.assertTrue(hitting.targets)
        points = np.asarray(hitting.points)
        for i in hitting.targets:
            self.assertTrue(contains_points(instance.objects[i], points).any())

    def test_empty_when_nothing_crosses(self):
        """Test a cell no object touches."""
        instance = FatInstance.from_objects(
            [GeometricObject.disk(0, 0, 0.1), GeometricObject.disk(0.3, 0, 0.1), GeometricObject.disk(10, 10, 0.1)]
        )
        empty_quadrant = QuadtreeCell(1, (0, 1))
        hitting = boundary_hitting_set(empty_quadrant, instance.objects, instance.d_star)
        self.assertEqual(hitting.targets, [])
        self.assertEqual(hitting.points, [])


class FatSpannerTest(SimpleTestCase):
    """Test the fat spanners."""

    def setUp(self):
        reset_config()

    def check(self, objects, spanner):
        graph = build_intersection_graph(objects)
        spanner.check_subgraph(graph)
        report = check_spanner(graph, spanner, mode="exact")
        self.assertTrue(report.ok, f"worst edge {report.worst_edge} at {report.worst_hops} hops")

    def test_three_hop_disks(self):
        """Test stretch 3 on random disks."""
        objects = generate_instance("disks", 100, seed=5)
        spanner = fat_spanner_3hop(FatInstance.from_objects(objects))
        self.assertEqual((spanner.declared_stretch, spanner.construction_tag), (3, "fat-I"))
        self.check(objects, spanner)

    def test_three_hop_squares_and_balls(self):
        """Test stretch 3 on squares and 3-balls."""
        for family, params in (("squares", {}), ("balls_d", {"d": 3})):
            objects = generate_instance(family, 70, params, seed=6)
            self.check(objects, fat_spanner_3hop(FatInstance.from_objects(objects)))

    def test_clique(self):
        """Test that disks through a point get a sparse spanner."""
        objects = generate_instance("clique_point", 60, seed=7)
        spanner = fat_spanner_3hop(FatInstance.from_objects(objects))
        self.check(objects, spanner)
        self.assertLess(len(spanner), 60 * 59 // 2)

    def test_tk_levels(self):
        """Test stretch t_2 = 12 on disks."""
        objects = generate_instance("disks", 90, seed=8)
        spanner = fat_spanner_tk(FatInstance.from_objects(objects), 2)
        self.assertEqual(spanner.declared_stretch, 12)
        self.assertEqual(spanner.parameters["k"], 2)
        self.check(objects, spanner)

    def test_tk_level_one_delegates(self):
        """Test that k = 1 is the 3-hop construction."""
        objects = generate_instance("disks", 20, seed=9)
        self.assertEqual(fat_spanner_tk(FatInstance.from_objects(objects), 1).construction_tag, "fat-I")

    def test_empty_instance(self):
        """Test that no objects give no edges."""
        self.assertEqual(fat_spanner_3hop(FatInstance.from_objects([])).edges, [])

    def test_reports_group_sizes(self):
        """Test the recorded parameters."""
        objects = generate_instance("squares", 40, seed=10)
        params = fat_spanner_3hop(FatInstance.from_objects(objects)).parameters
        self.assertEqual(params["d_star"], 5)
        self.assertEqual(len(params["group_sizes"]), 5)

    def test_rescale_boundary_instances(self):
        """Test instances whose lowest object sits on the rescaled origin."""
        disks = generate_instance("disks", 250, {}, 2)
        self.check(disks, fat_spanner_3hop(FatInstance.from_objects(disks)))
        self.check(disks, fat_spanner_tk(FatInstance.from_objects(disks), 2))
        balls = generate_instance("balls_d", 60, seed=0)
        self.check(balls, fat_spanner_3hop(FatInstance.from_objects(balls)))

    def test_fatness_per_level(self):
        """Test the fatness recorded for each recursion level."""
        objects = generate_instance("squares", 60, seed=11)
        params = fat_spanner_tk(FatInstance.from_objects(objects), 2).parameters
        self.assertEqual(params["fatness"], 16.0)
        self.assertEqual(params["fatness_per_level"], [16.0, 256.0])
        self.assertEqual(fat_spanner_3hop(FatInstance.from_objects(objects)).parameters["fatness_per_level"], [16.0])

    def test_cells_per_level(self):
        """Test that every level of fat-II records the cells it hit."""
        objects = generate_instance("squares", 80, seed=5)
        params = fat_spanner_tk(FatInstance.from_objects(objects), 2).parameters
        self.assertEqual(len(params["cells_per_level"]), 2)
        self.assertGreater(params["cells_per_level"][0], 0)
        self.assertEqual(len(fat_spanner_3hop(FatInstance.from_objects(objects)).parameters["cells_per_level"]), 1)

    def test_pair_outside_every_group_is_an_error(self):
        """Test that an intersecting pair with no common shift group raises."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(1, 0, 1)]
        with patch("django_hopspan.constructions.fat.shift_groups", return_value=[[0], [1], [], [], []]):
            with self.assertRaises(StructuralViolation):
                fat_spanner_3hop(FatInstance.from_objects(objects))


@override_settings(HOPSPAN={"RECURSION_CUTOFF": 2})
class DegenerateFatTest(SimpleTestCase):
    """Test fat spanners on rectangles without area."""

    def setUp(self):
        reset_config()

    def tearDown(self):
        reset_config()

    def check(self, objects, spanner):
        graph = build_intersection_graph(objects)
        spanner.check_subgraph(graph)
        report = check_spanner(graph, spanner, mode="exact")
        self.assertTrue(report.ok, f"{spanner.construction_tag}: worst edge {report.worst_edge}")

    def test_point_and_segments_three_hop(self):
        """Test stretch 3 with a point rectangle and zero-width rectangles."""
        objects = degenerate_rects()
        spanner = fat_spanner_3hop(FatInstance.from_objects(objects))
        self.check(objects, spanner)
        self.assertGreater(spanner.parameters["thin_objects"], 0)

    def test_point_and_segments_tk(self):
        """Test stretch 12 with a point rectangle and zero-width rectangles."""
        objects = degenerate_rects()
        self.check(objects, fat_spanner_tk(FatInstance.from_objects(objects), 2))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(int_rects, min_size=2, max_size=14))
    def test_integer_rectangles(self, objects):
        """Test both constructions on integer rectangles with zero extents."""
        self.check(objects, fat_spanner_3hop(FatInstance.from_objects(objects)))
        self.check(objects, fat_spanner_tk(FatInstance.from_objects(objects), 2))
