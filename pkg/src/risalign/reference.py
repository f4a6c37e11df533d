"""Independent verifiers: exhaustive grid search and the alignment test.

Nothing here depends on the optimizers — these are the other side of the
cross-check. The grid maximum lower-bounds the true optimum and the
analytic bound upper-bounds it, so any optimizer's result can be
sandwiched between the two.
"""

import numpy as np

from .validation import TWO_PI, check_gains, check_phases

#: Largest number of grid points brute_force_max will evaluate.
DEFAULT_GRID_CAP = 10_000_000


class GridSizeError(ValueError):
    """Requested grid exceeds the evaluation cap."""


def brute_force_max(gains, points_per_dim, cap=DEFAULT_GRID_CAP):
    """Exhaustive maximum of the delivered power over a uniform phase grid.

    Every element's phase ranges over ``{2*pi*k/K : 0 <= k < K}`` with
    ``K = points_per_dim``, so ``K**n`` configurations are evaluated.
    Intentionally naive — the cost is exponential in ``n`` and the point is
    to be obviously correct, not fast. Ties resolve to the lexicographically
    smallest grid-index tuple.

    Parameters
    ----------
    gains : array-like of complex
    points_per_dim : int
        Grid resolution per element, at least 2.
    cap : int
        Refuse (``GridSizeError``) if ``K**n`` exceeds this.

    Returns
    -------
    (float, ndarray)
        Best power found and the phase configuration achieving it. The grid
        maximum is at most :func:`~risalign.channel.optimal_power_bound` and
        approaches it as ``K`` grows.
    """
    gains = check_gains(gains)
    k = int(points_per_dim)
    if k < 2:
        raise ValueError(f"points_per_dim must be >= 2, got {points_per_dim}")
    n = gains.size
    if k**n > cap:
        raise GridSizeError(
            f"grid of {k}**{n} = {k**n} points exceeds the cap of {cap}"
        )
    levels = TWO_PI * np.arange(k) / k
    phasors = np.exp(1j * levels)
    total = np.zeros((k,) * n, dtype=complex)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = k
        total = total + gains[axis] * phasors.reshape(shape)
    power = total.real**2 + total.imag**2
    flat = int(np.argmax(power))  # first occurrence in C order = lexicographic
    best_idx = np.unravel_index(flat, power.shape)
    return float(power.flat[flat]), levels[list(best_idx)]


def check_fixed_point_alignment(gains, phases, tol):
    """True iff every rotated contribution shares one argument to within ``tol``.

    A configuration the sequential optimizer cannot improve is exactly one
    where all ``gains[k] * exp(1j*phases[k])`` point the same way; this
    checks that property directly from the gains. Spread is measured as the
    largest absolute circular distance (radians) to the first element's
    argument. Zero-magnitude gains have no argument and are rejected.
    """
    gains = check_gains(gains)
    phases = check_phases(phases, n=gains.size)
    if np.any(gains == 0):
        raise ValueError("alignment is undefined for zero-magnitude gains")
    if not np.isfinite(tol) or tol < 0:
        raise ValueError(f"tol must be finite and >= 0, got {tol}")
    args = np.angle(gains * np.exp(1j * phases))
    spread = np.angle(np.exp(1j * (args - args[0])))
    return bool(np.max(np.abs(spread)) <= tol)
