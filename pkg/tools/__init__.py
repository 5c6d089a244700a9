"""Utility scripts and helpers."""
