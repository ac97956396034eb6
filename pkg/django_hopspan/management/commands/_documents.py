"""
Reading documents and mapping library errors for the hopspan commands.
"""
import functools
import json

from django.core.management.base import CommandError

from django_hopspan.exceptions import HopspanError, InputError
from django_hopspan.serializers import InstanceSerializer, SpannerSerializer, load_validated
from django_hopspan.utils import read_json

ERROR_RETURN_CODE = 2
VERIFY_FAILED_RETURN_CODE = 1


def load_instance(path):
    return load_validated(InstanceSerializer, read_json(path), f"instance {path}")


def load_spanner(path, objects=None):
    spanner = load_validated(SpannerSerializer, read_json(path), f"spanner {path}")
    if objects is not None and spanner.n != len(objects):
        raise InputError(f"spanner has n={spanner.n} but the instance has {len(objects)} objects")
    return spanner


def parse_params(pairs) -> dict:
    """``["region=10", "d=3"]`` -> ``{"region": 10, "d": 3}``; values parse as JSON when they can."""
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise CommandError(f"expected KEY=VALUE, got {pair!r}", returncode=ERROR_RETURN_CODE)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def reports_errors(handle):
    """Turn :class:`HopspanError` raised by a command's ``handle`` into ``CommandError``."""

    @functools.wraps(handle)
    def wrapper(self, *args, **options):
        try:
            return handle(self, *args, **options)
        except HopspanError as e:
            raise CommandError(f"{type(e).__name__}: {e.detail}", returncode=ERROR_RETURN_CODE) from e

    return wrapper
