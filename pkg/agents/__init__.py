"""Async sweep workers for normality scans and theorem verification."""
