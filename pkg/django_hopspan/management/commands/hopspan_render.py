"""
Management command to draw a planar instance and its spanner as SVG.
"""
from django.core.management.base import BaseCommand

from django_hopspan.harness.render import render_svg

from ._documents import load_instance, load_spanner, reports_errors


class Command(BaseCommand):
    help = "Render a planar instance, and optionally a spanner, to SVG"

    def add_arguments(self, parser):
        parser.add_argument("-i", "--instance", required=True, help="Instance JSON path")
        parser.add_argument("-s", "--spanner", help="Spanner JSON path")
        parser.add_argument("-o", "--output", required=True, help="SVG path")

    @reports_errors
    def handle(self, *args, **options):
        objects = load_instance(options["instance"])
        spanner = load_spanner(options["spanner"], objects) if options["spanner"] else None
        render_svg(objects, spanner, options["output"])
        self.stdout.write(self.style.SUCCESS(f"Wrote {options['output']}"))
