"""
DRF serializers for the JSON documents the commands read: instances,
spanners and experiment specs.

``save()`` on a valid serializer returns the domain value (a list of
objects, a :class:`Spanner` or an :class:`ExperimentSpec`).
"""
from rest_framework import serializers

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject, ObjectKind
from django_hopspan.graph import Spanner
from django_hopspan.harness.generators import FAMILIES
from django_hopspan.harness.runner import ExperimentSpec
from django_hopspan.services import CONSTRUCTIONS

Coordinate = serializers.FloatField


class GeometricObjectSerializer(serializers.Serializer):
    """One object of an instance document; the fields used depend on ``kind``."""

    REQUIRED = {
        ObjectKind.DISK: ("center", "radius"),
        ObjectKind.BALL: ("center", "radius"),
        ObjectKind.BOX: ("lo", "hi"),
        ObjectKind.RECT: ("lo", "hi"),
        ObjectKind.H_SEGMENT: ("x1", "x2", "y"),
        ObjectKind.V_SEGMENT: ("x", "y1", "y2"),
        ObjectKind.V_LINE: ("x",),
        ObjectKind.POLYLINE: ("points",),
        ObjectKind.UNION: ("members",),
    }

    kind = serializers.ChoiceField(choices=[k.value for k in ObjectKind])
    center = serializers.ListField(child=Coordinate(), min_length=1, required=False)
    radius = Coordinate(required=False)
    lo = serializers.ListField(child=Coordinate(), min_length=1, required=False)
    hi = serializers.ListField(child=Coordinate(), min_length=1, required=False)
    x = Coordinate(required=False)
    x1 = Coordinate(required=False)
    x2 = Coordinate(required=False)
    y = Coordinate(required=False)
    y1 = Coordinate(required=False)
    y2 = Coordinate(required=False)
    points = serializers.ListField(
        child=serializers.ListField(child=Coordinate(), min_length=2, max_length=2),
        min_length=1,
        required=False,
    )
    members = serializers.ListField(
        child=serializers.IntegerField(min_value=0), min_length=1, required=False
    )

    def validate(self, attrs):
        kind = ObjectKind(attrs["kind"])
        missing = [name for name in self.REQUIRED[kind] if name not in attrs]
        if missing:
            raise serializers.ValidationError(f"{kind.value} needs {', '.join(missing)}")
        attrs["kind"] = kind
        return attrs


def build_object(attrs: dict, earlier: list[GeometricObject]) -> GeometricObject:
    """
    Turn validated object fields into a :class:`GeometricObject`.

    Union members index objects that appear earlier in the same document.
    """
    kind = attrs["kind"]
    if kind == ObjectKind.DISK:
        if len(attrs["center"]) != 2:
            raise InputError("disk center must be 2D")
        return GeometricObject.disk(*attrs["center"], attrs["radius"])
    if kind == ObjectKind.BALL:
        return GeometricObject.ball(attrs["center"], attrs["radius"])
    if kind == ObjectKind.BOX:
        return GeometricObject.box(attrs["lo"], attrs["hi"])
    if kind == ObjectKind.RECT:
        if len(attrs["lo"]) != 2 or len(attrs["hi"]) != 2:
            raise InputError("axis_rect bounds must be 2D")
        return GeometricObject.rect(*attrs["lo"], *attrs["hi"])
    if kind == ObjectKind.H_SEGMENT:
        return GeometricObject.h_segment(attrs["x1"], attrs["x2"], attrs["y"])
    if kind == ObjectKind.V_SEGMENT:
        return GeometricObject.v_segment(attrs["x"], attrs["y1"], attrs["y2"])
    if kind == ObjectKind.V_LINE:
        return GeometricObject.v_line(attrs["x"])
    if kind == ObjectKind.POLYLINE:
        return GeometricObject.polyline(attrs["points"])

    parts: list[GeometricObject] = []
    for m in attrs["members"]:
        if m >= len(earlier):
            raise InputError(f"union member {m} does not refer to an earlier object")
        member = earlier[m]
        parts.extend(member.parts if member.kind == ObjectKind.UNION else (member,))
    return GeometricObject.union(parts, attrs["members"])


class InstanceSerializer(serializers.Serializer):
    format_version = serializers.IntegerField(required=False)
    meta = serializers.DictField(required=False, default=dict)
    objects = GeometricObjectSerializer(many=True, allow_empty=True)

    def validate_format_version(self, value):
        if value > get_conf().FORMAT_VERSION:
            raise serializers.ValidationError(f"unsupported format version {value}")
        return value

    def create(self, validated_data) -> list[GeometricObject]:
        objects: list[GeometricObject] = []
        for attrs in validated_data["objects"]:
            objects.append(build_object(attrs, objects))
        dimensions = {u.dimension for u in objects}
        if len(dimensions) > 1:
            raise InputError(f"mixed dimensions in one instance: {sorted(dimensions)}")
        return objects


class SpannerSerializer(serializers.Serializer):
    format_version = serializers.IntegerField(required=False)
    t = serializers.IntegerField(min_value=1)
    construction = serializers.CharField()
    n = serializers.IntegerField(min_value=0)
    parameters = serializers.DictField(required=False, default=dict)
    edges = serializers.ListField(
        child=serializers.ListField(
            child=serializers.IntegerField(min_value=0), min_length=2, max_length=2
        ),
        allow_empty=True,
    )

    def validate(self, attrs):
        n = attrs["n"]
        for u, v in attrs["edges"]:
            if u == v or u >= n or v >= n:
                raise serializers.ValidationError(f"edge ({u}, {v}) is not a pair of distinct vertices below {n}")
        return attrs

    def create(self, validated_data) -> Spanner:
        return Spanner(
            n=validated_data["n"],
            edges=[tuple(e) for e in validated_data["edges"]],
            declared_stretch=validated_data["t"],
            construction_tag=validated_data["construction"],
            parameters=validated_data["parameters"],
        )


class ExperimentSpecSerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=sorted(FAMILIES))
    construction = serializers.ChoiceField(choices=sorted(CONSTRUCTIONS))
    ladder = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=True)
    seeds = serializers.ListField(child=serializers.IntegerField(), min_length=1)
    params = serializers.DictField(required=False, default=dict)
    k = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    output = serializers.CharField(required=False, allow_blank=True, default="")

    def validate_ladder(self, value):
        if any(b <= a for a, b in zip(value, value[1:])):
            raise serializers.ValidationError("n ladder must be strictly increasing")
        return value

    def create(self, validated_data) -> ExperimentSpec:
        return ExperimentSpec(**validated_data)


def load_validated(serializer_class, data, what: str):
    """
    Validate ``data`` with ``serializer_class`` and return ``save()``'s value.

    Raises:
        InputError: With the serializer's error dict when validation fails.
    """
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise InputError(f"invalid {what}: {serializer.errors}")
    return serializer.save()
