"""Shared input checks and angle conventions.

Angles are radians throughout. The canonical phase interval is ``[0, 2*pi)``
and two-argument arctangents follow :func:`numpy.angle`, i.e. ``(-pi, pi]``.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def check_gains(gains):
    """Coerce ``gains`` to a 1-D complex array and validate it.

    Requires at least one entry and no NaN/Inf in either component.
    """
    arr = np.asarray(gains, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("gains must be a nonempty 1-D sequence of complex numbers")
    if not np.all(np.isfinite(arr)):
        raise ValueError("gains must be finite (no NaN or Inf entries)")
    return arr


def check_phases(phases, n=None):
    """Coerce ``phases`` to a 1-D float array, optionally of length ``n``."""
    arr = np.asarray(phases, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("phases must be a nonempty 1-D sequence of angles in radians")
    if not np.all(np.isfinite(arr)):
        raise ValueError("phases must be finite (no NaN or Inf entries)")
    if n is not None and arr.size != n:
        raise ValueError(f"expected {n} phases, got {arr.size}")
    return arr


def wrap_phase(angle):
    """Wrap an angle or array of angles into ``[0, 2*pi)``.

    ``np.mod`` can round a tiny negative input up to exactly ``2*pi``; that
    endpoint is folded back to ``0.0`` so the interval stays half-open.
    """
    wrapped = np.mod(angle, TWO_PI)
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(angle) == 0:
        return float(wrapped)
    return wrapped
