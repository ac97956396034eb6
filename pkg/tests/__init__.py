"""Test suite for django-server-incidents."""

