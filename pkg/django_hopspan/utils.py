"""
Utility functions for object documents, canonical JSON and fallback logging.
"""
import datetime
import decimal
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from django.utils import timezone

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import InputError
from django_hopspan.geometry import GeometricObject, ObjectKind

logger = logging.getLogger(__name__)


def object_to_dict(u: GeometricObject) -> dict[str, Any]:
    """
    Convert an object to its instance-document form.

    Args:
        u: The object.

    Returns:
        dict: ``{"kind": ..., <kind fields>}`` using the field names the
        instance serializer reads back.
    """
    kind = u.kind
    if kind in (ObjectKind.DISK, ObjectKind.BALL):
        return {"kind": kind.value, "center": list(u.center), "radius": u.radius}
    if kind in (ObjectKind.BOX, ObjectKind.RECT):
        return {"kind": kind.value, "lo": list(u.lo), "hi": list(u.hi)}
    if kind == ObjectKind.H_SEGMENT:
        return {"kind": kind.value, "x1": u.lo[0], "x2": u.hi[0], "y": u.lo[1]}
    if kind == ObjectKind.V_SEGMENT:
        return {"kind": kind.value, "x": u.lo[0], "y1": u.lo[1], "y2": u.hi[1]}
    if kind == ObjectKind.V_LINE:
        return {"kind": kind.value, "x": u.lo[0]}
    if kind == ObjectKind.POLYLINE:
        return {"kind": kind.value, "points": [list(p) for p in u.points]}
    return {"kind": kind.value, "members": list(u.members)}


def instance_to_dict(objects: Sequence[GeometricObject], meta: dict | None = None) -> dict[str, Any]:
    return {
        "format_version": get_conf().FORMAT_VERSION,
        "meta": dict(meta or {}),
        "objects": [object_to_dict(u) for u in objects],
    }


def spanner_to_dict(spanner) -> dict[str, Any]:
    return {"format_version": get_conf().FORMAT_VERSION, **spanner.as_dict()}


def sanitize_for_json(value: Any) -> Any:
    """
    Recursively convert Python objects into JSON-serializable structures.

    - Keeps primitives (str, int, bool, None) and finite floats as-is.
    - Recursively processes dict, list, tuple, set (sets are sorted).
    - Converts numpy scalars and arrays to Python values.
    - Converts Fraction, Decimal and datetime-like values to str().

    Args:
        value: Any Python value to sanitize.

    Returns:
        JSON-serializable value (str, int, float, bool, None, dict, list).
    """
    if value is None or isinstance(value, (str, bool, int)):
        return value

    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)

    if isinstance(value, np.generic):
        return sanitize_for_json(value.item())

    if isinstance(value, np.ndarray):
        return sanitize_for_json(value.tolist())

    if isinstance(value, (Fraction, decimal.Decimal, datetime.datetime, datetime.date)):
        return str(value)

    if isinstance(value, dict):
        return {str(sanitize_for_json(k)): sanitize_for_json(v) for k, v in value.items()}

    if isinstance(value, set):
        return [sanitize_for_json(v) for v in sorted(value)]

    if isinstance(value, (list, tuple)):
        return [sanitize_for_json(v) for v in value]

    try:
        return str(value)
    except Exception:
        return repr(value)


def canonical_json(data: Any) -> str:
    """Sorted keys, fixed indentation and a trailing newline; identical data gives identical text."""
    return json.dumps(sanitize_for_json(data), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(canonical_json(data), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    """
    Read a JSON document.

    Raises:
        InputError: If the file is missing or does not parse.
    """
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def safe_log_to_file(data: dict[str, Any]) -> None:
    """
    Append benchmark data to the fallback JSONL file when a database write fails.

    Args:
        data: The rows or run data to log.
    """
    config = get_conf()
    if not config.FALLBACK_FILE_LOG:
        return

    try:
        log_entry = {
            "timestamp": timezone.now().isoformat(),
            **sanitize_for_json(data),
        }

        with open(config.FALLBACK_FILE_PATH, "a") as f:
            f.write(json.dumps(log_entry, ensure_ascii=False, sort_keys=True) + "\n")
    except Exception as e:
        logger.error(f"Failed to write to fallback log file: {e}")
