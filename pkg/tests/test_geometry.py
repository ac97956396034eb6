"""
Tests for objects, predicates and rescaling.
"""
import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from django_hopspan.exceptions import InputError
from django_hopspan.geometry import (
    GeometricObject,
    ObjectKind,
    bounding_box,
    contains_point,
    contains_points,
    depth,
    intersects,
    leftmost_point,
    object_contains_box,
    object_inside_box,
    object_meets_box,
    rescale_to_unit,
    side_length,
)
from django_hopspan.harness.generators import generate_instance

coords = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
radii = st.floats(min_value=0.1, max_value=5, allow_nan=False, allow_infinity=False)
disks = st.builds(GeometricObject.disk, coords, coords, radii)
rects = st.builds(
    lambda x, y, w, h: GeometricObject.rect(x, y, x + w, y + h), coords, coords, radii, radii
)
polylines = st.lists(st.tuples(coords, coords), min_size=1, max_size=5).map(GeometricObject.polyline)
planar = st.one_of(disks, rects, polylines)
# Rectangles with a zero width or height, and single points
degenerate_rects = st.builds(
    lambda x, y, w, horizontal: GeometricObject.rect(x, y, x + (w if horizontal else 0), y + (0 if horizontal else w)),
    coords,
    coords,
    radii,
    st.booleans(),
)
points = st.builds(lambda x, y: GeometricObject.rect(x, y, x, y), coords, coords)


class ObjectValidationTest(SimpleTestCase):
    """Test object construction and validation."""

    def test_disk_rejects_non_positive_radius(self):
        """Test that a zero radius is an input error."""
        with self.assertRaises(InputError):
            GeometricObject.disk(0, 0, 0)

    def test_box_rejects_inverted_bounds(self):
        """Test that lo above hi on an axis is an input error."""
        with self.assertRaises(InputError):
            GeometricObject.box((0, 2, 0), (1, 1, 1))

    def test_polyline_needs_a_vertex(self):
        """Test that an empty polyline is rejected."""
        with self.assertRaises(InputError):
            GeometricObject.polyline([])

    def test_rejects_non_finite_coordinates(self):
        """Test that NaN coordinates are rejected."""
        with self.assertRaises(InputError):
            GeometricObject.disk(math.nan, 0, 1)

    def test_planar_kind_must_be_2d(self):
        """Test that planar kinds refuse another dimension."""
        with self.assertRaises(InputError):
            GeometricObject(ObjectKind.DISK, 3, center=(0.0, 0.0, 0.0), radius=1.0)

    def test_vertical_line_is_unbounded(self):
        """Test that a vertical line has no side length."""
        line = GeometricObject.v_line(3)
        self.assertFalse(line.is_bounded)
        with self.assertRaises(InputError):
            side_length(line)

    def test_union_keeps_members(self):
        """Test that a union object records its member indices."""
        u = GeometricObject.union([GeometricObject.disk(0, 0, 1), GeometricObject.disk(3, 0, 1)], [4, 7])
        self.assertEqual(u.members, (4, 7))
        self.assertEqual(bounding_box(u), ((-1.0, -1.0), (4.0, 1.0)))


class IntersectsTest(SimpleTestCase):
    """Test the closed-set intersection predicate."""

    def test_tangent_disks_intersect(self):
        """Test that touching disks count as intersecting."""
        self.assertTrue(intersects(GeometricObject.disk(0, 0, 1), GeometricObject.disk(2, 0, 1)))
        self.assertFalse(intersects(GeometricObject.disk(0, 0, 1), GeometricObject.disk(2.001, 0, 1)))

    def test_boxes_sharing_a_corner(self):
        """Test that rectangles sharing only a corner intersect."""
        a = GeometricObject.rect(0, 0, 1, 1)
        b = GeometricObject.rect(1, 1, 2, 2)
        self.assertTrue(intersects(a, b))

    def test_disk_and_rect(self):
        """Test the disk-box distance check near a corner."""
        rect = GeometricObject.rect(0, 0, 1, 1)
        self.assertTrue(intersects(GeometricObject.disk(1.5, 0.5, 0.5), rect))
        self.assertFalse(intersects(GeometricObject.disk(1.5, 1.5, 0.7), rect))

    def test_crossing_segments(self):
        """Test that a horizontal and a vertical segment cross."""
        h = GeometricObject.h_segment(0, 4, 1)
        v = GeometricObject.v_segment(2, 0, 3)
        self.assertTrue(intersects(h, v))
        self.assertFalse(intersects(h, GeometricObject.v_segment(5, 0, 3)))

    def test_vertical_line_meets_segment_below_it(self):
        """Test that an infinite line meets a segment anywhere along x."""
        line = GeometricObject.v_line(2)
        self.assertTrue(intersects(line, GeometricObject.h_segment(0, 4, -100)))
        self.assertFalse(intersects(line, GeometricObject.h_segment(3, 4, 0)))

    def test_polyline_crosses_polyline(self):
        """Test the orientation test on two crossing polylines."""
        a = GeometricObject.polyline([(0, 0), (2, 2)])
        b = GeometricObject.polyline([(0, 2), (2, 0)])
        c = GeometricObject.polyline([(3, 0), (3, 5)])
        self.assertTrue(intersects(a, b))
        self.assertFalse(intersects(a, c))

    def test_collinear_overlap(self):
        """Test that collinear overlapping polylines intersect."""
        a = GeometricObject.polyline([(0, 0), (2, 0)])
        b = GeometricObject.polyline([(1, 0), (3, 0)])
        self.assertTrue(intersects(a, b))

    def test_polyline_and_disk(self):
        """Test segment-to-ball distance."""
        p = GeometricObject.polyline([(-2, 1), (2, 1)])
        self.assertTrue(intersects(p, GeometricObject.disk(0, 0, 1)))
        self.assertFalse(intersects(p, GeometricObject.disk(0, 0, 0.9)))

    def test_union_intersects_if_a_member_does(self):
        """Test union-object intersection."""
        u = GeometricObject.union([GeometricObject.disk(0, 0, 1), GeometricObject.disk(10, 0, 1)])
        self.assertTrue(intersects(u, GeometricObject.disk(11.5, 0, 1)))
        self.assertFalse(intersects(u, GeometricObject.disk(5, 0, 1)))

    def test_dimension_mismatch(self):
        """Test that objects of different dimension are rejected."""
        with self.assertRaises(InputError):
            intersects(GeometricObject.disk(0, 0, 1), GeometricObject.ball((0, 0, 0), 1))

    def test_balls_in_3d(self):
        """Test ball intersection in three dimensions."""
        a = GeometricObject.ball((0, 0, 0), 1)
        self.assertTrue(intersects(a, GeometricObject.ball((1, 1, 1), 1)))
        self.assertFalse(intersects(a, GeometricObject.ball((2, 2, 2), 1)))

    @settings(max_examples=200, deadline=None)
    @given(planar, planar)
    def test_symmetry(self, a, b):
        """Test that intersects(a, b) == intersects(b, a)."""
        self.assertEqual(intersects(a, b), intersects(b, a))

    @settings(max_examples=100, deadline=None)
    @given(planar)
    def test_reflexive(self, a):
        """Test that every object intersects itself."""
        self.assertTrue(intersects(a, a))


class ContainmentTest(SimpleTestCase):
    """Test point and box containment helpers."""

    def test_contains_points_matches_scalar(self):
        """Test that the vectorised check agrees with the scalar one."""
        rng = np.random.default_rng(3)
        points = rng.uniform(-2, 2, size=(200, 2))
        for u in (
            GeometricObject.disk(0, 0, 1),
            GeometricObject.rect(-1, -0.5, 0.5, 1),
            GeometricObject.union([GeometricObject.disk(1, 1, 0.5), GeometricObject.rect(-2, -2, -1, -1)]),
        ):
            expected = [contains_point(u, p) for p in points]
            self.assertEqual(contains_points(u, points).tolist(), expected)

    def test_depth(self):
        """Test depth counts closed containment."""
        objects = [GeometricObject.disk(0, 0, 1), GeometricObject.disk(1, 0, 1), GeometricObject.disk(5, 5, 1)]
        self.assertEqual(depth((0.5, 0), objects), 2)
        self.assertEqual(depth((1, 0), objects), 2)
        self.assertEqual(depth((9, 9), objects), 0)

    def test_box_relations(self):
        """Test meets, inside and contains for a disk and a box."""
        disk = GeometricObject.disk(0.5, 0.5, 0.2)
        self.assertTrue(object_inside_box(disk, (0, 0), (1, 1)))
        self.assertFalse(object_inside_box(disk, (0, 0), (0.7, 1)))
        self.assertTrue(object_meets_box(disk, (0.6, 0.4), (2, 2)))
        self.assertFalse(object_meets_box(disk, (0.8, 0.8), (2, 2)))
        self.assertTrue(object_contains_box(disk, (0.45, 0.45), (0.55, 0.55)))
        self.assertFalse(object_contains_box(disk, (0.3, 0.3), (0.7, 0.7)))

    def test_leftmost_point(self):
        """Test leftmost points of a disk, a box and a polyline."""
        self.assertEqual(leftmost_point(GeometricObject.disk(2, 3, 1)), (1.0, 3.0))
        self.assertEqual(leftmost_point(GeometricObject.rect(1, 2, 3, 4)), (1.0, 2.0))
        self.assertEqual(leftmost_point(GeometricObject.polyline([(2, 0), (1, 5), (1, 3)])), (1.0, 3.0))


    def test_side_length(self):
        """Test the enclosing hypercube side of a disk, a box and a union."""
        self.assertEqual(side_length(GeometricObject.disk(0, 0, 1)), 2)
        self.assertEqual(side_length(GeometricObject.rect(0, 0, 1, 3)), 3)
        squares = [GeometricObject.rect(0, 0, 1, 1), GeometricObject.rect(2, 2, 3, 3)]
        self.assertEqual(side_length(GeometricObject.union(squares)), 3)

    def test_depth_of_concentric_disks(self):
        """Test depth at the common centre of three disks."""
        objects = [GeometricObject.disk(0, 0, r) for r in (1, 2, 3)]
        self.assertEqual(depth((0, 0), objects), 3)


class RescaleTest(SimpleTestCase):
    """Test rescaling into the unit domain."""

    def test_rescaled_objects_fit_the_unit_cube(self):
        """Test that all rescaled boxes lie in [0, 1)^d."""
        objects = [GeometricObject.disk(10, 10, 2), GeometricObject.disk(40, 15, 5), GeometricObject.disk(20, 30, 1)]
        scaled, affine = rescale_to_unit(objects)
        for u in scaled:
            lo, hi = bounding_box(u)
            self.assertTrue(all(0 <= a and b < 1 for a, b in zip(lo, hi)))
        self.assertAlmostEqual(affine.to_original(scaled[0].center)[0], 10.0)

    def test_rescale_keeps_intersections(self):
        """Test that uniform scaling preserves the intersection pattern."""
        objects = [GeometricObject.rect(0, 0, 2, 2), GeometricObject.rect(2, 1, 5, 3), GeometricObject.rect(6, 6, 7, 7)]
        scaled, _ = rescale_to_unit(objects)
        for i in range(3):
            for j in range(i + 1, 3):
                self.assertEqual(intersects(objects[i], objects[j]), intersects(scaled[i], scaled[j]))

    def test_rescale_refuses_unbounded(self):
        """Test that a vertical line cannot be rescaled."""
        with self.assertRaises(InputError):
            rescale_to_unit([GeometricObject.v_line(0)])

    def test_lowest_object_stays_inside_after_rounding(self):
        """Test that the object defining the lower corner maps to coordinates >= 0."""
        for objects in (generate_instance("disks", 250, {}, 2), generate_instance("balls_d", 60, seed=0)):
            scaled, _ = rescale_to_unit(objects)
            self.assertGreaterEqual(min(min(bounding_box(u)[0]) for u in scaled), 0.0)

    def test_far_from_origin(self):
        """Test a small instance at large coordinates."""
        objects = [GeometricObject.disk(1e6 + 0.1, 1e6, 0.3), GeometricObject.rect(1e6, 1e6, 1e6 + 0.2, 1e6 + 0.5)]
        scaled, _ = rescale_to_unit(objects)
        for u in scaled:
            lo, hi = bounding_box(u)
            self.assertTrue(all(0 <= a and b < 1 for a, b in zip(lo, hi)))

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.one_of(disks, rects, degenerate_rects, points), min_size=1, max_size=12))
    def test_rescaled_boxes_fit(self, objects):
        """Test that rescaled bounding boxes always lie in [0, 1)^2."""
        scaled, _ = rescale_to_unit(objects)
        for u in scaled:
            lo, hi = bounding_box(u)
            self.assertTrue(all(0 <= a and b < 1 for a, b in zip(lo, hi)), (lo, hi))
