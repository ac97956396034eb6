"""
Admin interface for stored benchmark runs.
"""
import json

from django.contrib import admin
from django.utils.html import format_html

from django_hopspan.models import BenchmarkResult, BenchmarkRun

PRE_STYLE = "background: #f5f5f5; padding: 10px; border-radius: 4px; overflow-x: auto; max-height: 300px; overflow-y: auto;"


class BenchmarkResultInline(admin.TabularInline):
    model = BenchmarkResult
    extra = 0
    can_delete = False
    fields = [
        "n",
        "seed",
        "m",
        "spanner_edges",
        "declared_t",
        "max_required_hops",
        "verified_ok",
        "verify_mode",
        "build_time_ms",
        "error",
    ]
    readonly_fields = fields


@admin.register(BenchmarkRun)
class BenchmarkRunAdmin(admin.ModelAdmin):
    """Admin interface for BenchmarkRun model."""

    list_display = [
        "construction",
        "k",
        "family",
        "status",
        "result_count",
        "created_at",
    ]
    list_filter = [
        "status",
        "construction",
        "family",
        ("created_at", admin.DateFieldListFilter),
    ]
    search_fields = ["construction", "family"]
    readonly_fields = [
        "id",
        "family",
        "construction",
        "k",
        "status",
        "format_version",
        "created_at",
        "formatted_spec",
        "formatted_summary",
    ]
    fieldsets = (
        (
            "Experiment",
            {
                "fields": ("id", "construction", "k", "family", "status", "created_at"),
                "classes": ("wide",),
            },
        ),
        (
            "Details",
            {
                "fields": ("format_version", "formatted_spec", "formatted_summary"),
                "classes": ("collapse",),
            },
        ),
    )
    inlines = [BenchmarkResultInline]
    actions = ["recompute_status"]

    def result_count(self, obj):
        return obj.results.count()

    result_count.short_description = "Rows"

    def formatted_spec(self, obj):
        """Display the spec snapshot."""
        if not obj.spec:
            return "-"
        return format_html('<pre style="{}">{}</pre>', PRE_STYLE, json.dumps(obj.spec, indent=2, sort_keys=True))

    formatted_spec.short_description = "Spec"

    def formatted_summary(self, obj):
        return format_html('<pre style="{}">{}</pre>', PRE_STYLE, json.dumps(obj.summary(), indent=2))

    formatted_summary.short_description = "Summary"

    def recompute_status(self, request, queryset):
        """Set each selected run's status from its stored rows."""
        for run in queryset:
            failed = run.results.filter(verified_ok=False).exists()
            run.status = BenchmarkRun.Status.FAILED if failed else BenchmarkRun.Status.PASSED
            run.save(update_fields=["status"])

    recompute_status.short_description = "Recompute status from rows"


@admin.register(BenchmarkResult)
class BenchmarkResultAdmin(admin.ModelAdmin):
    """Admin interface for BenchmarkResult model."""

    list_display = [
        "run",
        "n",
        "seed",
        "spanner_edges",
        "declared_t",
        "max_required_hops",
        "verified_ok",
    ]
    list_filter = ["verified_ok", "verify_mode", "run__construction"]
    search_fields = ["run__construction", "run__family", "error"]
    readonly_fields = [f.name for f in BenchmarkResult._meta.fields]
