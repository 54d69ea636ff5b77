"""Shared store for acceptance verdicts: criterion -> (passed, seconds, detail)."""

RESULTS = {}
