"""
Management command to check a spanner document against its instance.
"""
from django.core.management.base import BaseCommand, CommandError

from django_hopspan.graph import build_intersection_graph
from django_hopspan.services import check_spanner
from django_hopspan.utils import write_json

from ._documents import VERIFY_FAILED_RETURN_CODE, load_instance, load_spanner, reports_errors


class Command(BaseCommand):
    help = "Verify that a spanner joins every intersecting pair within t hops"

    def add_arguments(self, parser):
        parser.add_argument("-i", "--instance", required=True, help="Instance JSON path")
        parser.add_argument("-s", "--spanner", required=True, help="Spanner JSON path")
        parser.add_argument("--t", type=int, help="Hop bound (default: the declared stretch)")
        parser.add_argument("--mode", choices=["exact", "sampled"], help="Default depends on n")
        parser.add_argument("--seed", type=int, help="Sampling seed")
        parser.add_argument("--report", help="Also write the report as JSON here")

    @reports_errors
    def handle(self, *args, **options):
        objects = load_instance(options["instance"])
        spanner = load_spanner(options["spanner"], objects)
        graph = build_intersection_graph(objects)
        report = check_spanner(graph, spanner, t=options["t"], mode=options["mode"], seed=options["seed"])

        if options["report"]:
            write_json(options["report"], report.as_dict())

        histogram = ", ".join(f"{hops}: {count}" for hops, count in sorted(report.histogram.items()))
        self.stdout.write(f"Checked {report.checked_edges} edges ({report.mode}); hops {{{histogram}}}")
        if not report.ok:
            raise CommandError(
                f"{report.unreachable} edges need more than {report.t} hops, e.g. {report.worst_edge}",
                returncode=VERIFY_FAILED_RETURN_CODE,
            )
        self.stdout.write(
            self.style.SUCCESS(f"OK: every checked edge is within {report.t} hops (max {report.worst_hops})")
        )
