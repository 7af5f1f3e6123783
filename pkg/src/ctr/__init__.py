"""Compact trip representation."""
