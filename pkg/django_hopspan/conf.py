"""
Configuration accessor for django-hopspan.
Reads the HOPSPAN dict from Django settings with sane defaults.
"""
import os
from dataclasses import dataclass


@dataclass
class Config:
    """Configuration dataclass with defaults."""

    DEFAULT_SEED: int = 0
    # Subproblems with at most this many vertices emit all their edges
    RECURSION_CUTOFF: int = 8
    # c_0 of the string schedule for k > 2
    STRING_C0: int = 4
    # Leftmost points are jittered by less than this to make them distinct
    JITTER_MAGNITUDE: float = 2.0 ** -40
    JITTER_SEED: int = 0
    HITTING_GRID_LIMIT: int = 20000
    # c_s: sample objects a seeding cell may cross before it is split
    SHALLOW_SAMPLE_DEPTH: int = 4
    SHALLOW_MAX_DEPTH: int = 18
    SHALLOW_MAX_ROUNDS: int = 3
    SHALLOW_PROBE_GRID: int = 48
    EXACT_VERIFY_MAX_N: int = 3000
    SAMPLED_VERIFY_FRACTION: float = 0.1
    WORKERS: int = 1
    FORMAT_VERSION: int = 1
    PERSIST_RESULTS: bool = False
    FALLBACK_FILE_LOG: bool = True
    FALLBACK_FILE_PATH: str = "hopspan_fallback.log"

    def __post_init__(self):
        """Clamp knobs that must stay positive."""
        self.RECURSION_CUTOFF = max(2, int(self.RECURSION_CUTOFF))
        self.STRING_C0 = max(1, int(self.STRING_C0))
        self.WORKERS = max(1, int(self.WORKERS))


_config: Config | None = None


def get_conf() -> Config:
    """
    Get the current configuration, loading from Django settings if needed.

    Returns:
        Config: The current configuration instance.
    """
    global _config
    if _config is None:
        _reload_config()
    return _config


def _reload_config():
    """Reload configuration from Django settings and the environment."""
    global _config

    try:
        from django.conf import settings
        user_settings = dict(getattr(settings, "HOPSPAN", {}) or {})
    except Exception:
        # Settings not configured (plain library use)
        user_settings = {}

    env_seed = os.environ.get("HOPSPAN_SEED")
    if env_seed:
        user_settings["DEFAULT_SEED"] = int(env_seed)

    _config = Config(**user_settings)


def reset_config():
    """Reset the cached configuration (useful for testing)."""
    global _config
    _config = None
