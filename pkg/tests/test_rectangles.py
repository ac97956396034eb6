"""
Tests for segment, line and rectangle spanners.
"""
from django.test import SimpleTestCase

from django_hopspan.constructions.rectangles import (
    CoverInterval,
    cover_intervals,
    rect_spanner,
    seg_line_spanner,
    seg_spanner,
)
from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject
from django_hopspan.graph import build_intersection_graph
from django_hopspan.harness.generators import generate_instance
from django_hopspan.services import check_spanner


def assert_three_hop(test, objects, spanner):
    graph = build_intersection_graph(objects)
    spanner.check_subgraph(graph)
    report = check_spanner(graph, spanner, mode="exact")
    test.assertTrue(report.ok, f"{spanner.construction_tag}: worst edge {report.worst_edge}")
    return graph


class CoverIntervalsTest(SimpleTestCase):
    """Test the greedy interval cover."""

    def test_worked_example(self):
        """Test four overlapping extents."""
        cover = cover_intervals([(0, 4), (2, 7), (5, 6), (6, 10)])
        self.assertEqual(
            cover.intervals,
            [
                CoverInterval(0.0, 0.0, None),
                CoverInterval(0.0, 4.0, 0),
                CoverInterval(4.0, 7.0, 1),
                CoverInterval(7.0, 10.0, 3),
            ],
        )
        self.assertEqual(cover.runs, 1)

    def test_gap_starts_new_run(self):
        """Test that disjoint extents give two runs."""
        cover = cover_intervals([(0, 1), (3, 4)])
        self.assertEqual(cover.runs, 2)

    def test_locate(self):
        """Test point location in half-open intervals."""
        cover = cover_intervals([(0, 4), (2, 7), (5, 6), (6, 10)])
        self.assertEqual(cover.locate(0), 0)
        self.assertEqual(cover.locate(4), 1)
        self.assertEqual(cover.locate(4.5), 2)
        self.assertEqual(cover.locate(10), 3)
        self.assertIsNone(cover.locate(11))

    def test_needs_segments(self):
        """Test that an empty cover is rejected."""
        with self.assertRaises(InputError):
            cover_intervals([])

    def test_segments_give_the_extent_cover(self):
        """Test that horizontal segments at any height give the cover of their extents."""
        extents = [(0, 4), (2, 7), (5, 6), (6, 10)]
        segments = [GeometricObject.h_segment(x1, x2, y) for y, (x1, x2) in enumerate(extents)]
        self.assertEqual(cover_intervals(segments).intervals, cover_intervals(extents).intervals)

    def test_rejects_other_kinds(self):
        """Test that a vertical segment is not a cover input."""
        with self.assertRaises(InputError):
            cover_intervals([GeometricObject.v_segment(0, 0, 1)])


class SegLineTest(SimpleTestCase):
    """Test the segment and vertical line spanner."""

    def test_one_segment_three_lines(self):
        """Test that a segment crossing three lines keeps all three edges."""
        objects = [
            GeometricObject.h_segment(0, 10, 1),
            GeometricObject.v_line(2),
            GeometricObject.v_line(5),
            GeometricObject.v_line(8),
        ]
        spanner = seg_line_spanner(objects)
        self.assertEqual(spanner.edges, [(0, 1), (0, 2), (0, 3)])

    def test_random_instance(self):
        """Test stretch 3 and linear size on random segments and lines."""
        objects = generate_instance("seg_lines", 120, seed=1)
        spanner = seg_line_spanner(objects)
        assert_three_hop(self, objects, spanner)
        self.assertLessEqual(len(spanner), 4 * len(objects))

    def test_rejects_vertical_segments(self):
        """Test that only horizontal segments and lines are accepted."""
        with self.assertRaises(InputError):
            seg_line_spanner([GeometricObject.v_segment(0, 0, 1)])


class SegTest(SimpleTestCase):
    """Test the horizontal and vertical segment spanner."""

    def test_random_instance(self):
        """Test stretch 3 on random segments."""
        objects = generate_instance("hv_segments", 150, seed=2)
        assert_three_hop(self, objects, seg_spanner(objects))

    def test_grid_of_segments(self):
        """Test a complete bipartite crossing pattern."""
        objects = [GeometricObject.h_segment(0, 10, y) for y in range(6)]
        objects += [GeometricObject.v_segment(x, -1, 6) for x in range(1, 9)]
        graph = assert_three_hop(self, objects, seg_spanner(objects))
        self.assertEqual(graph.m, 6 * 8)

    def test_collinear_segments(self):
        """Test overlapping segments on one line."""
        objects = [GeometricObject.h_segment(0, 2, 0), GeometricObject.h_segment(1, 3, 0)]
        self.assertEqual(seg_spanner(objects).edges, [(0, 1)])

    def test_verticals_ending_on_a_segment(self):
        """Test verticals whose endpoint lies on a horizontal segment."""
        objects = [
            GeometricObject.h_segment(0, 4, 0),
            GeometricObject.h_segment(0, 4, 2),
            GeometricObject.v_segment(1, 0, 1),
            GeometricObject.v_segment(3, 1, 2),
            GeometricObject.v_segment(2, -1, 3),
        ]
        graph = assert_three_hop(self, objects, seg_spanner(objects))
        self.assertEqual(sorted(graph.edges()), [(0, 2), (0, 4), (1, 3), (1, 4)])


class RectTest(SimpleTestCase):
    """Test the rectangle spanner."""

    def test_random_rectangles(self):
        """Test stretch 3 on random rectangles."""
        objects = generate_instance("rects", 100, seed=3)
        assert_three_hop(self, objects, rect_spanner(objects))

    def test_nested_rectangles(self):
        """Test containment chains, where no sides meet."""
        objects = generate_instance("nested_rects", 60, seed=4)
        spanner = rect_spanner(objects)
        assert_three_hop(self, objects, spanner)
        self.assertGreater(spanner.parameters["corner_edges"], 0)

    def test_cross_shape(self):
        """Test two rectangles that cross without containing a corner."""
        objects = [GeometricObject.rect(0, 1, 4, 2), GeometricObject.rect(1, 0, 2, 4)]
        self.assertEqual(rect_spanner(objects).edges, [(0, 1)])

    def test_rejects_disks(self):
        """Test that only rectangles are accepted."""
        with self.assertRaises(InputError):
            rect_spanner([GeometricObject.disk(0, 0, 1)])
