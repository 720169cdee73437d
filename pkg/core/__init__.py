"""Numerical core: measures, moments, solves, paraorthogonal polynomials and zeros."""
