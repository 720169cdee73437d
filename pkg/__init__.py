"""Laurent multiple orthogonal polynomials on the unit circle."""
