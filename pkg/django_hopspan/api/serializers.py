"""
Serializers for the read-only API.
"""
from rest_framework import serializers

from django_hopspan.models import BenchmarkResult, BenchmarkRun


class BenchmarkResultSerializer(serializers.ModelSerializer):
    """Serializer for BenchmarkResult model (read-only)."""

    class Meta:
        model = BenchmarkResult
        fields = [
            "id",
            "run",
            "n",
            "seed",
            "m",
            "spanner_edges",
            "edges_per_n_log_n",
            "declared_t",
            "verified_ok",
            "max_required_hops",
            "build_time_ms",
            "verify_time_ms",
            "verify_mode",
            "aux",
            "error",
        ]
        read_only_fields = fields


class BenchmarkRunSerializer(serializers.ModelSerializer):
    """Serializer for BenchmarkRun model (read-only)."""

    status_display = serializers.CharField(source="get_status_display", read_only=True)
    formatted_created_at = serializers.DateTimeField(
        source="created_at",
        read_only=True,
        format="%Y-%m-%d %H:%M:%S %Z",
    )
    result_count = serializers.IntegerField(source="results.count", read_only=True)

    class Meta:
        model = BenchmarkRun
        fields = [
            "id",
            "family",
            "construction",
            "k",
            "status",
            "status_display",
            "format_version",
            "spec",
            "formatted_created_at",
            "result_count",
        ]
        read_only_fields = fields
