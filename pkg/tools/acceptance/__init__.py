"""Acceptance harness for the jet calculus engine."""
