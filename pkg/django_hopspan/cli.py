"""
The ``hopspan`` console script.

``hopspan gen ...`` runs the ``hopspan_gen`` management command, and so on
for ``build``, ``verify``, ``bench`` and ``render``. Outside a Django
project a minimal settings module is configured so the commands also work
standalone; without a migrated database ``bench --persist`` falls back to
the JSONL file.
"""
import os
import sys

SUBCOMMANDS = ("gen", "build", "verify", "bench", "render")


def _configure_settings() -> None:
    from django.conf import settings

    if settings.configured or os.environ.get("DJANGO_SETTINGS_MODULE"):
        return
    settings.configure(
        INSTALLED_APPS=[
            "django.contrib.contenttypes",
            "django.contrib.auth",
            "rest_framework",
            "django_hopspan",
        ],
        DATABASES={"default": {"ENGINE": "django.db.backends.sqlite3", "NAME": ":memory:"}},
        USE_TZ=True,
        LOGGING={
            "version": 1,
            "disable_existing_loggers": False,
            "handlers": {"console": {"class": "logging.StreamHandler"}},
            "loggers": {"django_hopspan": {"handlers": ["console"], "level": os.environ.get("HOPSPAN_LOG_LEVEL", "WARNING")}},
        },
    )


def main(argv: list[str] | None = None) -> None:
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] not in SUBCOMMANDS:
        sys.stderr.write(f"usage: hopspan {{{','.join(SUBCOMMANDS)}}} [options]\n")
        sys.exit(2)

    _configure_settings()
    from django.core.management import execute_from_command_line

    execute_from_command_line(["hopspan", f"hopspan_{argv[1]}", *argv[2:]])


if __name__ == "__main__":
    main()
