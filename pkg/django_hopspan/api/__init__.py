"""Optional read-only API for stored benchmark runs."""
