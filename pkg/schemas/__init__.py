"""Pydantic schemas for system descriptions, run configuration and reports."""
