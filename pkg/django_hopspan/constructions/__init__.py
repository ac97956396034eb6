"""Spanner constructions, one module per object family."""
