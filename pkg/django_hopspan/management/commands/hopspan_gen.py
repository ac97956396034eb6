"""
Management command to generate a seeded instance document.
"""
from django.core.management.base import BaseCommand

from django_hopspan.conf import get_conf
from django_hopspan.harness.generators import FAMILIES, generate_instance
from django_hopspan.utils import instance_to_dict, write_json

from ._documents import parse_params, reports_errors


class Command(BaseCommand):
    help = "Generate a reproducible instance of one object family"

    def add_arguments(self, parser):
        parser.add_argument("--family", required=True, choices=sorted(FAMILIES))
        parser.add_argument("--n", type=int, required=True, help="Number of objects")
        parser.add_argument("--seed", type=int, help="Generator seed (default: DEFAULT_SEED)")
        parser.add_argument(
            "--param",
            action="append",
            metavar="KEY=VALUE",
            help="Family parameter such as region=10 or r_max=3; repeatable",
        )
        parser.add_argument("-o", "--output", required=True, help="Instance JSON path")

    @reports_errors
    def handle(self, *args, **options):
        seed = options["seed"] if options["seed"] is not None else get_conf().DEFAULT_SEED
        params = parse_params(options["param"])
        objects = generate_instance(options["family"], options["n"], params, seed)
        meta = {"family": options["family"], "n": options["n"], "seed": seed, "params": params}
        write_json(options["output"], instance_to_dict(objects, meta))
        self.stdout.write(
            self.style.SUCCESS(f"Wrote {len(objects)} {options['family']} objects to {options['output']}")
        )
