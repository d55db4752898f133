"""Tolerance conventions shared by every module."""

DEFAULT_TOL = 1e-9
PAIR_TOL = 1e-8


def scaled(tol, *magnitudes):
    """Absolute-plus-relative tolerance ``tol * max(1, |m1|, |m2|, ...)``."""
    return tol * max(1.0, *(abs(m) for m in magnitudes)) if magnitudes else tol
