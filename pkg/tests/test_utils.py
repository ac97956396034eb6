"""
Tests for document conversion, canonical JSON and the document serializers.
"""
import json
import math
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject, ObjectKind
from django_hopspan.graph import Spanner
from django_hopspan.harness.generators import generate_instance
from django_hopspan.harness.runner import ExperimentSpec
from django_hopspan.serializers import (
    ExperimentSpecSerializer,
    InstanceSerializer,
    SpannerSerializer,
    load_validated,
)
from django_hopspan.utils import (
    canonical_json,
    instance_to_dict,
    read_json,
    sanitize_for_json,
    spanner_to_dict,
    write_json,
)


class SanitizeTest(SimpleTestCase):
    """Test JSON sanitization."""

    def test_numpy_values(self):
        """Test numpy scalars and arrays."""
        data = {"a": np.int64(3), "b": np.array([1.5, 2.0]), "c": np.bool_(True)}
        self.assertEqual(sanitize_for_json(data), {"a": 3, "b": [1.5, 2.0], "c": True})

    def test_non_finite_and_fractions(self):
        """Test that inf and Fraction become strings."""
        self.assertEqual(sanitize_for_json(math.inf), "inf")
        self.assertEqual(sanitize_for_json(Fraction(31, 3)), "31/3")

    def test_sets_are_sorted(self):
        """Test that sets become sorted lists."""
        self.assertEqual(sanitize_for_json({3, 1, 2}), [1, 2, 3])

    def test_canonical_json_is_stable(self):
        """Test key order and the trailing newline."""
        text = canonical_json({"b": 1, "a": (1, 2)})
        self.assertEqual(text, '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n')


class DocumentFileTest(SimpleTestCase):
    """Test reading and writing documents."""

    def test_write_then_read(self):
        """Test that a written document reads back equal."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "doc.json"
            write_json(path, {"x": [1, 2]})
            self.assertEqual(read_json(path), {"x": [1, 2]})

    def test_missing_file(self):
        """Test that a missing file is an input error."""
        with self.assertRaises(InputError):
            read_json("/nonexistent/instance.json")

    def test_bad_json(self):
        """Test that a malformed file is an input error."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.json"
            path.write_text("{not json")
            with self.assertRaises(InputError):
                read_json(path)


class InstanceSerializerTest(SimpleTestCase):
    """Test instance documents."""

    def load(self, data):
        return load_validated(InstanceSerializer, data, "instance")

    def test_generated_instances_read_back(self):
        """Test that every planar family survives the document form."""
        for family in ("disks", "rects", "hv_segments", "seg_lines", "polylines"):
            objects = generate_instance(family, 6, seed=1)
            doc = json.loads(canonical_json(instance_to_dict(objects, {"family": family})))
            self.assertEqual(self.load(doc), objects)

    def test_union_members(self):
        """Test that a union refers to earlier objects."""
        doc = {
            "objects": [
                {"kind": "disk", "center": [0, 0], "radius": 1},
                {"kind": "disk", "center": [3, 0], "radius": 1},
                {"kind": "union_object", "members": [0, 1]},
            ]
        }
        objects = self.load(doc)
        self.assertEqual(objects[2].kind, ObjectKind.UNION)
        self.assertEqual(objects[2].members, (0, 1))
        self.assertEqual(len(objects[2].parts), 2)

    def test_union_forward_reference(self):
        """Test that a union member must come first."""
        doc = {"objects": [{"kind": "union_object", "members": [1]}, {"kind": "disk", "center": [0, 0], "radius": 1}]}
        with self.assertRaises(InputError):
            self.load(doc)

    def test_unknown_kind(self):
        """Test that unknown kinds are rejected."""
        with self.assertRaises(InputError):
            self.load({"objects": [{"kind": "triangle"}]})

    def test_missing_field(self):
        """Test that a disk without a radius is rejected."""
        with self.assertRaises(InputError):
            self.load({"objects": [{"kind": "disk", "center": [0, 0]}]})

    def test_mixed_dimensions(self):
        """Test that a disk and a 3-ball cannot share an instance."""
        doc = {
            "objects": [
                {"kind": "disk", "center": [0, 0], "radius": 1},
                {"kind": "ball_d", "center": [0, 0, 0], "radius": 1},
            ]
        }
        with self.assertRaises(InputError):
            self.load(doc)

    def test_future_format_version(self):
        """Test that newer document versions are refused."""
        with self.assertRaises(InputError):
            self.load({"format_version": 99, "objects": []})

    def test_invalid_geometry(self):
        """Test that a zero radius passes the serializer but not the object check."""
        with self.assertRaises(InputError):
            self.load({"objects": [{"kind": "disk", "center": [0, 0], "radius": 0}]})


class SpannerSerializerTest(SimpleTestCase):
    """Test spanner documents."""

    def test_reads_back(self):
        """Test the document form of a spanner."""
        spanner = Spanner(4, [(0, 1), (2, 3)], 3, "fat-I", {"d": 2})
        loaded = load_validated(SpannerSerializer, spanner_to_dict(spanner), "spanner")
        self.assertEqual(loaded, spanner)

    def test_bad_edges(self):
        """Test loops and out-of-range vertices."""
        for edge in ([1, 1], [0, 4]):
            doc = {"t": 3, "construction": "seg", "n": 4, "edges": [edge]}
            with self.assertRaises(InputError):
                load_validated(SpannerSerializer, doc, "spanner")


class ExperimentSpecSerializerTest(SimpleTestCase):
    """Test experiment spec documents."""

    def test_valid_spec(self):
        """Test that a valid document becomes an ExperimentSpec."""
        doc = {"family": "disks", "construction": "fat-II", "ladder": [10, 20], "seeds": [0], "k": 2}
        spec = load_validated(ExperimentSpecSerializer, doc, "spec")
        self.assertIsInstance(spec, ExperimentSpec)
        self.assertEqual(spec.k, 2)
        self.assertEqual(spec.params, {})

    def test_rejections(self):
        """Test unknown constructions, bad ladders and missing seeds."""
        base = {"family": "disks", "construction": "fat-I", "ladder": [10], "seeds": [0]}
        for change in ({"construction": "nope"}, {"ladder": [20, 10]}, {"seeds": []}, {"family": "cubes"}):
            with self.assertRaises(InputError):
                load_validated(ExperimentSpecSerializer, {**base, **change}, "spec")
