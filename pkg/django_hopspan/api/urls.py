"""
URL patterns for the read-only API.
"""
from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .views import BenchmarkResultViewSet, BenchmarkRunViewSet

router = DefaultRouter()
router.register(r"runs", BenchmarkRunViewSet, basename="run")
router.register(r"results", BenchmarkResultViewSet, basename="result")

app_name = "django_hopspan_api"

urlpatterns = [
    path("", include(router.urls)),
]
