"""
Management command to run an experiment spec over its n ladder.
"""
from django.core.management.base import BaseCommand, CommandError

from django_hopspan.conf import get_conf
from django_hopspan.harness.runner import median_separator_ratio, run_separator_suite, run_suite
from django_hopspan.models import BenchmarkRun
from django_hopspan.serializers import ExperimentSpecSerializer, load_validated
from django_hopspan.utils import read_json

from ._documents import VERIFY_FAILED_RETURN_CODE, reports_errors


class Command(BaseCommand):
    help = "Generate, build and verify every (n, seed) of an experiment spec and write a CSV"

    def add_arguments(self, parser):
        parser.add_argument("--spec", required=True, help="Experiment spec JSON path")
        parser.add_argument("-o", "--output", help="CSV path (overrides the spec's output)")
        parser.add_argument("--workers", type=int, help="Process pool size (default: WORKERS)")
        parser.add_argument(
            "--persist",
            action="store_true",
            help="Store the run in the database (also enabled by PERSIST_RESULTS)",
        )
        parser.add_argument(
            "--separator-csv",
            help="Also measure the top-level separator of every instance and write this CSV",
        )

    @reports_errors
    def handle(self, *args, **options):
        spec = load_validated(ExperimentSpecSerializer, read_json(options["spec"]), f"spec {options['spec']}")
        if options["output"]:
            spec.output = options["output"]

        rows = run_suite(spec, workers=options["workers"])

        if options["persist"] or get_conf().PERSIST_RESULTS:
            run = BenchmarkRun.objects.record(spec, rows)
            if run is None:
                self.stdout.write(self.style.WARNING("Database write failed; rows went to the fallback file"))
            else:
                self.stdout.write(f"Stored run {run.id}")

        for row in rows:
            status = "ok" if row.verified_ok else (row.error or f"max hops {row.max_required_hops}")
            self.stdout.write(
                f"  n={row.n} seed={row.seed} m={row.m} edges={row.spanner_edges} "
                f"t={row.declared_t} {status}"
            )

        if options["separator_csv"]:
            separators = run_separator_suite(spec, options["separator_csv"], workers=options["workers"])
            for n, ratio in median_separator_ratio(separators).items():
                self.stdout.write(f"  n={n} median |X|/sqrt(m)={ratio:.3f}")

        failed = [row for row in rows if not row.verified_ok]
        if failed:
            raise CommandError(
                f"{len(failed)} of {len(rows)} rows failed verification", returncode=VERIFY_FAILED_RETURN_CODE
            )
        target = f" to {spec.output}" if spec.output else ""
        self.stdout.write(self.style.SUCCESS(f"All {len(rows)} rows verified{target}"))
