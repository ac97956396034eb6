"""
Views for the read-only API.
"""
from rest_framework import viewsets
from rest_framework.decorators import action
from rest_framework.response import Response

from django_hopspan.models import BenchmarkResult, BenchmarkRun
from .permissions import DEFAULT_PERMISSION_CLASSES
from .serializers import BenchmarkResultSerializer, BenchmarkRunSerializer


class BenchmarkRunViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Read-only ViewSet for BenchmarkRun model.

    Provides:
    - GET /runs/                 - List all runs
    - GET /runs/{id}/            - Retrieve a run
    - GET /runs/{id}/summary/    - Pass rate and size per n
    """

    queryset = BenchmarkRun.objects.all()
    serializer_class = BenchmarkRunSerializer
    permission_classes = DEFAULT_PERMISSION_CLASSES

    @action(detail=True, methods=["get"])
    def summary(self, request, *args, **kwargs):
        run = self.get_object()
        return Response(
            {
                "id": str(run.id),
                "construction": run.construction,
                "family": run.family,
                "status": run.status,
                **run.summary(),
            }
        )


class BenchmarkResultViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Read-only ViewSet for BenchmarkResult model.

    ``?run=<id>`` restricts the list to one run.
    """

    serializer_class = BenchmarkResultSerializer
    permission_classes = DEFAULT_PERMISSION_CLASSES

    def get_queryset(self):
        queryset = BenchmarkResult.objects.select_related("run")
        run_id = self.request.query_params.get("run")
        if run_id:
            queryset = queryset.filter(run_id=run_id)
        return queryset
