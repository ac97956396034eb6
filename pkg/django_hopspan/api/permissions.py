"""
Permissions for the read-only API.
"""
from rest_framework import permissions


class IsStaffOrReadOnly(permissions.BasePermission):
    """
    Read access for staff users; no write access for anyone.
    """

    def has_permission(self, request, view):
        if request.method in permissions.SAFE_METHODS:
            return bool(request.user and request.user.is_staff)
        return False


DEFAULT_PERMISSION_CLASSES = [IsStaffOrReadOnly]
