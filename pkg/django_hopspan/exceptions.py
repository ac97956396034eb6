"""
Custom exceptions for django-hopspan.
"""
from rest_framework.exceptions import APIException


class HopspanError(APIException):
    """
    Base class for every error raised by the library.

    Rooted in DRF's APIException so the read-only API renders these as JSON
    without a custom handler; management commands turn them into
    CommandError.
    """

    status_code = 500
    default_detail = "A hop-spanner computation failed."
    default_code = "hopspan_error"

    def __init__(self, detail=None, code=None):
        if detail is None:
            detail = self.default_detail
        super().__init__(detail, code)


class InputError(HopspanError):
    """Invalid objects, parameters, families or file contents."""

    status_code = 400
    default_detail = "Invalid input."
    default_code = "input_error"


class PreconditionError(HopspanError):
    """An operation was called outside its documented precondition."""

    status_code = 400
    default_detail = "Operation precondition violated."
    default_code = "precondition_error"


class StructuralViolation(HopspanError):
    """A produced structure broke one of its invariants."""

    default_detail = "Structural invariant violated."
    default_code = "structural_violation"


class ShallowCuttingError(HopspanError):
    """
    Shallow-cutting refinement did not converge.

    Usage:
        try:
            level = shallow_cutting(objects, k=8, r=16)
        except ShallowCuttingError as e:
            print(e.diagnostics["uncovered_probes"])
    """

    default_detail = "Shallow cutting refinement did not converge."
    default_code = "shallow_cutting_error"

    def __init__(self, detail=None, code=None, diagnostics: dict | None = None):
        super().__init__(detail, code)
        self.diagnostics = diagnostics or {}
