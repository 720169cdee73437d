"""Command handlers and report writers for the mopuc CLI."""
