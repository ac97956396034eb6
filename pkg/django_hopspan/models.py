"""
Data models for stored benchmark runs.
"""
import logging
import uuid

from django.db import DatabaseError, models, transaction

from django_hopspan.conf import get_conf
from django_hopspan.utils import safe_log_to_file

logger = logging.getLogger(__name__)


class BenchmarkRunManager(models.Manager):
    """Custom manager for BenchmarkRun with best-effort recording."""

    def record(self, spec, rows) -> "BenchmarkRun | None":
        """
        Store an experiment and its rows in one transaction.

        On a database failure the rows are appended to the fallback JSONL file
        instead and ``None`` is returned.

        Args:
            spec: The :class:`ExperimentSpec` that was run.
            rows: Its :class:`ResultRow` list.

        Returns:
            BenchmarkRun | None: The stored run.
        """
        status = BenchmarkRun.Status.PASSED if all(r.verified_ok for r in rows) else BenchmarkRun.Status.FAILED
        try:
            with transaction.atomic():
                run = self.create(
                    family=spec.family,
                    construction=spec.construction,
                    k=spec.k,
                    spec=spec.as_dict(),
                    status=status,
                    format_version=get_conf().FORMAT_VERSION,
                )
                BenchmarkResult.objects.bulk_create(
                    [BenchmarkResult.from_row(run, row) for row in rows]
                )
            return run
        except DatabaseError as e:
            logger.warning(f"Could not store benchmark run, writing fallback file: {e}")
            safe_log_to_file(
                {"spec": spec.as_dict(), "status": status, "rows": [row.as_dict() for row in rows]}
            )
            return None


class BenchmarkRun(models.Model):
    """One executed experiment spec."""

    class Status(models.TextChoices):
        PASSED = "PASSED", "Passed"
        FAILED = "FAILED", "Failed"

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    family = models.CharField(max_length=50, db_index=True)
    construction = models.CharField(max_length=50, db_index=True)
    k = models.PositiveSmallIntegerField(null=True, blank=True)
    spec = models.JSONField(default=dict, help_text="Snapshot of the experiment spec")
    status = models.CharField(max_length=20, choices=Status.choices, db_index=True)
    format_version = models.PositiveSmallIntegerField(default=1)
    created_at = models.DateTimeField(auto_now_add=True, db_index=True)

    objects = BenchmarkRunManager()

    class Meta:
        ordering = ["-created_at"]
        indexes = [
            models.Index(fields=["construction", "-created_at"], name="hopspan_run_construction_idx"),
        ]

    def __str__(self) -> str:
        return f"{self.construction} on {self.family} ({self.status})"

    def summary(self) -> dict:
        """Pass rate and spanner size per n over the stored rows."""
        results = list(self.results.all())
        by_n: dict[int, list[BenchmarkResult]] = {}
        for result in results:
            by_n.setdefault(result.n, []).append(result)
        return {
            "rows": len(results),
            "pass_rate": (sum(r.verified_ok for r in results) / len(results)) if results else 0.0,
            "ladder": [
                {
                    "n": n,
                    "runs": len(group),
                    "mean_edges": sum(r.spanner_edges for r in group) / len(group),
                    "mean_edges_per_n_log_n": sum(r.edges_per_n_log_n for r in group) / len(group),
                    "max_required_hops": max(r.max_required_hops for r in group),
                }
                for n, group in sorted(by_n.items())
            ],
        }


class BenchmarkResult(models.Model):
    """One (n, seed) row of a run."""

    id = models.BigAutoField(primary_key=True)
    run = models.ForeignKey(BenchmarkRun, on_delete=models.CASCADE, related_name="results")
    n = models.PositiveIntegerField(db_index=True)
    seed = models.BigIntegerField()
    m = models.PositiveBigIntegerField(default=0)
    spanner_edges = models.PositiveBigIntegerField(default=0)
    edges_per_n_log_n = models.FloatField(default=0.0)
    declared_t = models.PositiveIntegerField(default=0)
    verified_ok = models.BooleanField(default=False)
    max_required_hops = models.PositiveIntegerField(default=0)
    build_time_ms = models.FloatField(default=0.0)
    verify_time_ms = models.FloatField(default=0.0)
    verify_mode = models.CharField(max_length=10, blank=True)
    aux = models.JSONField(default=dict)
    error = models.TextField(blank=True)

    class Meta:
        ordering = ["run", "n", "seed"]

    def __str__(self) -> str:
        return f"n={self.n} seed={self.seed} ok={self.verified_ok}"

    @classmethod
    def from_row(cls, run: BenchmarkRun, row) -> "BenchmarkResult":
        return cls(
            run=run,
            n=row.n,
            seed=row.seed,
            m=row.m,
            spanner_edges=row.spanner_edges,
            edges_per_n_log_n=row.edges_per_n_log_n,
            declared_t=row.declared_t,
            verified_ok=row.verified_ok,
            max_required_hops=row.max_required_hops,
            build_time_ms=row.build_time_ms,
            verify_time_ms=row.verify_time_ms,
            verify_mode=row.verify_mode,
            aux=row.aux,
            error=row.error,
        )
