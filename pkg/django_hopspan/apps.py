from django.apps import AppConfig


class DjangoHopspanConfig(AppConfig):
    """App configuration for django_hopspan."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "django_hopspan"
    verbose_name = "Django Hopspan"

    def ready(self):
        """Drop any configuration cached before settings were loaded."""
        from django_hopspan.conf import reset_config

        reset_config()
