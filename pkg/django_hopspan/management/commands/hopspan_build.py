"""
Management command to build a spanner for an instance.
"""
from django.core.management.base import BaseCommand

from django_hopspan.services import CONSTRUCTIONS, build_spanner
from django_hopspan.utils import spanner_to_dict, write_json

from ._documents import load_instance, reports_errors


class Command(BaseCommand):
    help = "Build the intersection graph of an instance and a hop spanner of it"

    def add_arguments(self, parser):
        parser.add_argument("--construction", required=True, choices=sorted(CONSTRUCTIONS))
        parser.add_argument("--k", type=int, help="Level for string-III and fat-II (default 2)")
        parser.add_argument("--seed", type=int, help="Seed for randomised constructions")
        parser.add_argument("-i", "--instance", required=True, help="Instance JSON path")
        parser.add_argument("-o", "--output", required=True, help="Spanner JSON path")

    @reports_errors
    def handle(self, *args, **options):
        objects = load_instance(options["instance"])
        graph, spanner = build_spanner(
            objects, options["construction"], k=options["k"], seed=options["seed"]
        )
        write_json(options["output"], spanner_to_dict(spanner))
        self.stdout.write(
            self.style.SUCCESS(
                f"{spanner.construction_tag}: {len(spanner)} of {graph.m} edges, "
                f"declared t={spanner.declared_stretch}, written to {options['output']}"
            )
        )
