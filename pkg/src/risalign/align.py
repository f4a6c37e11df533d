"""Blind phase alignment from power readings only.

Per-element closed-form solvers, the sequential coordinate-ascent driver,
and an accept-if-better random-search baseline, packaged as scikit-learn
style estimators. Neither estimator ever sees the channel coefficients:
everything is driven through a :class:`~risalign.measurement.PowerMeter`.

The core identity: holding all other elements fixed, the delivered power as
a function of one element's phase offset ``phi`` is a raised sinusoid
``x1 + x2*cos(phi) + x3*sin(phi)``. Three probe readings at known offsets
pin down ``(x1, x2, x3)`` by a 3x3 linear solve, and the power-maximizing
offset is ``atan2(x3, x2)`` — no amplitude or phase measurement required.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .validation import TWO_PI, check_phases, wrap_phase

#: Probe offsets used by default; this triple admits a solver with no
#: explicit linear solve (see :func:`closed_form_update`).
DEFAULT_PROBE_ANGLES = (0.0, math.pi / 2.0, math.pi)

_DET_FLOOR = 1e-9


class DegenerateAnglesError(ValueError):
    """Probe-angle triple whose design matrix is numerically singular."""


def _wrap_scalar(angle):
    # scalar twin of validation.wrap_phase, kept free of numpy dispatch
    # overhead because the sweep calls it several times per element
    r = angle % TWO_PI
    if r >= TWO_PI:
        return 0.0
    return r


def _check_readings(y1, y2, y3):
    for y in (y1, y2, y3):
        if not math.isfinite(y) or y < 0.0:
            raise ValueError(f"power readings must be finite and >= 0, got {y!r}")


def _feedback_floor(y1, y2, y3):
    # below this, the cross terms are indistinguishable from rounding noise
    return 1e-12 * max(y1, y2, y3, 1.0)


def _design_determinant(angles):
    p1, p2, p3 = (float(a) for a in angles)
    c1, s1 = math.cos(p1), math.sin(p1)
    c2, s2 = math.cos(p2), math.sin(p2)
    c3, s3 = math.cos(p3), math.sin(p3)
    return (c2 * s3 - c3 * s2) - (c1 * s3 - c3 * s1) + (c1 * s2 - c2 * s1)


def _check_probe_angles(angles):
    """Validate a probe triple and return it wrapped into [0, 2*pi)."""
    angles = tuple(float(a) for a in angles)
    if len(angles) != 3:
        raise ValueError(f"expected exactly 3 probe angles, got {len(angles)}")
    if not all(math.isfinite(a) for a in angles):
        raise ValueError("probe angles must be finite")
    wrapped = tuple(_wrap_scalar(a) for a in angles)
    if abs(_design_determinant(wrapped)) <= _DET_FLOOR:
        raise DegenerateAnglesError(
            f"probe angles {angles} give a singular design matrix; "
            "the three offsets must be mutually distinct modulo 2*pi and "
            "not fall on a common cosine level"
        )
    return wrapped


def three_point_coefficients(angles, y1, y2, y3):
    """Fit ``y_l = x1 + x2*cos(phi_l) + x3*sin(phi_l)`` through three probes.

    ``x1`` is the phase-independent power floor, ``(x2, x3)`` the in-phase
    and quadrature cross terms between the probed element and the rest of
    the array. Exactly three probes, so this is a plain 3x3 solve — done by
    cofactor expansion rather than a general factorization, which keeps the
    per-probe cost flat and the result reproducible to the last bit.

    Raises
    ------
    DegenerateAnglesError
        If the probe angles are equal modulo ``2*pi`` or otherwise make the
        design matrix singular (``|det| <= 1e-9``).
    """
    p1, p2, p3 = (float(a) for a in angles)
    if not (math.isfinite(p1) and math.isfinite(p2) and math.isfinite(p3)):
        raise ValueError("probe angles must be finite")
    _check_readings(y1, y2, y3)
    c1, s1 = math.cos(p1), math.sin(p1)
    c2, s2 = math.cos(p2), math.sin(p2)
    c3, s3 = math.cos(p3), math.sin(p3)
    m12, m13, m23 = (
        c1 * s2 - c2 * s1,
        c1 * s3 - c3 * s1,
        c2 * s3 - c3 * s2,
    )
    det = m23 - m13 + m12
    if abs(det) <= _DET_FLOOR:
        raise DegenerateAnglesError(
            f"probe angles ({p1}, {p2}, {p3}) give a singular design matrix "
            f"(|det| = {abs(det):.3e})"
        )
    x1 = (m23 * y1 - m13 * y2 + m12 * y3) / det
    x2 = (-(s3 - s2) * y1 + (s3 - s1) * y2 - (s2 - s1) * y3) / det
    x3 = ((c3 - c2) * y1 - (c3 - c1) * y2 + (c2 - c1) * y3) / det
    return x1, x2, x3


def solve_three_point(angles, y1, y2, y3):
    """Power-maximizing phase offset for one element, from three readings.

    Probes taken at offsets ``angles`` relative to the element's current
    contribution. Returns the maximizer of the fitted sinusoid, wrapped into
    ``[0, 2*pi)``. Degenerate feedback — cross terms at or below
    ``1e-12 * max(readings, 1)``, meaning the element is effectively
    invisible — resolves to ``0.0`` (leave the element where it is).
    """
    _, x2, x3 = three_point_coefficients(angles, y1, y2, y3)
    if math.hypot(x2, x3) <= _feedback_floor(y1, y2, y3):
        return 0.0
    return float(_wrap_scalar(math.atan2(x3, x2)))


def closed_form_update(y1, y2, y3):
    """Phase offset for probes at ``(0, pi/2, pi)`` without the linear solve.

    For this triple the fit collapses to ``x2 = (y1 - y3)/2`` and
    ``x3 = (2*y2 - y1 - y3)/2``, so the update is
    ``atan2(2*y2 - y1 - y3, y1 - y3)`` wrapped into ``[0, 2*pi)``. Agrees
    with :func:`solve_three_point` bit for bit, including the same
    degenerate-feedback rule.
    """
    _check_readings(y1, y2, y3)
    re = y1 - y3
    im = 2.0 * y2 - y1 - y3
    if 0.5 * math.hypot(re, im) <= _feedback_floor(y1, y2, y3):
        return 0.0
    return float(_wrap_scalar(math.atan2(im, re)))


def _element_update(oracle, phases, idx, angles, use_closed_form):
    """Probe element ``idx`` at the three offsets and move it to the best one.

    Mutates ``phases`` in place; returns the three readings and the applied
    offset. Costs exactly three meter readings.
    """
    base = phases[idx]
    if angles[0] != 0.0:
        phases[idx] = _wrap_scalar(base + angles[0])
    y1 = oracle.measure(phases)
    phases[idx] = _wrap_scalar(base + angles[1])
    y2 = oracle.measure(phases)
    phases[idx] = _wrap_scalar(base + angles[2])
    y3 = oracle.measure(phases)
    if use_closed_form:
        delta = closed_form_update(y1, y2, y3)
    else:
        delta = solve_three_point(angles, y1, y2, y3)
    phases[idx] = _wrap_scalar(base + delta)
    return y1, y2, y3, delta


def sequential_sweep(oracle, phases, order=None, probe_angles=DEFAULT_PROBE_ANGLES):
    """One full coordinate-ascent pass: update every element once.

    Parameters
    ----------
    oracle : PowerMeter
        Measurement source; charged 3 readings per element.
    phases : array-like of float
        Starting configuration; not modified.
    order : sequence of int, optional
        Visit order — must be a permutation of ``range(n)``. Defaults to
        ascending.
    probe_angles : 3-tuple of float
        Probe offsets applied to the visited element.

    Returns
    -------
    (ndarray, list of MeasurementRecord)
        The updated phase vector (wrapped into ``[0, 2*pi)``) and a record
        of every probe taken, in order.
    """
    from .measurement import MeasurementRecord

    n = oracle.n_elements
    phases = wrap_phase(np.array(check_phases(phases, n=n), dtype=float, copy=True))
    angles = _check_probe_angles(probe_angles)
    use_cf = angles == DEFAULT_PROBE_ANGLES
    if order is None:
        order = range(n)
    else:
        order = [int(i) for i in order]
        if sorted(order) != list(range(n)):
            raise ValueError(f"order must be a permutation of range({n})")
    records = []
    for idx in order:
        base = phases[idx]
        start = oracle.count
        y1, y2, y3, _ = _element_update(oracle, phases, idx, angles, use_cf)
        for j, (off, reading) in enumerate(zip(angles, (y1, y2, y3))):
            probed = phases.copy()
            probed[idx] = _wrap_scalar(base + off)
            records.append(MeasurementRecord(start + 1 + j, probed, reading))
    return phases, records


@dataclass(frozen=True)
class OptimizationTrace:
    """Progress of one optimization run against measurement cost.

    ``counts[i]`` is the meter's cumulative reading count when sample ``i``
    was taken and ``powers[i]`` the exact objective of the configuration
    held at that moment — the true delivered power, not the (possibly
    noisy) reading, so noisy runs are scored on what they actually achieve.
    Sample 0 is the starting configuration; one sample follows every
    element update.
    """

    counts: np.ndarray
    powers: np.ndarray
    final_phases: np.ndarray
    sweeps_completed: int

    def __post_init__(self):
        counts = np.asarray(self.counts)
        powers = np.asarray(self.powers, dtype=float)
        if counts.shape != powers.shape or counts.ndim != 1 or counts.size == 0:
            raise ValueError("counts and powers must be nonempty 1-D arrays of equal length")
        if np.any(np.diff(counts) <= 0):
            raise ValueError("trace counts must be strictly increasing")

    @property
    def final_power(self):
        return float(self.powers[-1])


def _resolve_init(init, n, rng):
    if isinstance(init, str):
        if init == "zeros":
            return np.zeros(n)
        if init == "random":
            return rng.uniform(0.0, TWO_PI, size=n)
        raise ValueError(f"init must be 'zeros', 'random', or a phase array, got {init!r}")
    return wrap_phase(np.array(check_phases(init, n=n), dtype=float, copy=True))


class SequentialAligner(BaseEstimator):
    """Coordinate-ascent phase alignment driven only by power readings.

    Visits elements one at a time; each visit probes the meter at three
    offsets of that element's phase and moves the element to the offset that
    maximizes the fitted power sinusoid (:func:`solve_three_point`). On a
    noiseless meter the objective never decreases, each element lands on its
    conditionally optimal phase, and repeated sweeps drive the configuration
    to the known-gain optimum — all without ever observing the channel.

    Parameters
    ----------
    sweeps : int, default=1
        Full passes over the array. Each sweep costs ``3 * n`` readings.
    probe_angles : 3-tuple of float, default=(0, pi/2, pi)
        Probe offsets. The default triple uses the cheaper
        :func:`closed_form_update`; any non-singular triple works.
    init : {"zeros", "random"} or array-like, default="zeros"
        Starting phases.
    order : {"ascending", "shuffle"}, default="ascending"
        Element visit order. ``"shuffle"`` redraws a permutation each sweep.
    seed : int or None, default=None
        Drives ``init="random"`` and ``order="shuffle"``; unused otherwise.

    Attributes
    ----------
    phases_ : ndarray
        Final phase configuration, in ``[0, 2*pi)``.
    trace_ : OptimizationTrace
        Exact objective after every element update.
    final_reading_ : float
        One confirming meter reading taken at the final configuration.
    n_measurements_ : int
        Readings consumed: ``3 * n * sweeps + 1``.

    Examples
    --------
    >>> from risalign import PowerMeter, SequentialAligner
    >>> meter = PowerMeter([1 + 0j, -1 + 0j])
    >>> est = SequentialAligner(sweeps=1).fit(meter)
    >>> est.final_reading_
    4.0
    """

    def __init__(self, sweeps=1, probe_angles=DEFAULT_PROBE_ANGLES,
                 init="zeros", order="ascending", seed=None):
        self.sweeps = sweeps
        self.probe_angles = probe_angles
        self.init = init
        self.order = order
        self.seed = seed

    def fit(self, oracle):
        """Run the optimization against ``oracle`` (a PowerMeter-like object).

        The oracle must expose ``n_elements``, ``measure(phases)``,
        ``count``, and ``true_power(phases)``.
        """
        sweeps = int(self.sweeps)
        if sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.order not in ("ascending", "shuffle"):
            raise ValueError(f"order must be 'ascending' or 'shuffle', got {self.order!r}")
        angles = _check_probe_angles(self.probe_angles)
        use_cf = angles == DEFAULT_PROBE_ANGLES
        n = oracle.n_elements
        rng = np.random.default_rng(self.seed)
        theta = _resolve_init(self.init, n, rng)

        start_count = oracle.count
        total = n * sweeps
        counts = np.empty(total + 1, dtype=np.int64)
        powers = np.empty(total + 1, dtype=float)
        counts[0] = oracle.count
        powers[0] = oracle.true_power(theta)
        k = 0
        for _ in range(sweeps):
            if self.order == "shuffle":
                visit = rng.permutation(n)
            else:
                visit = range(n)
            for idx in visit:
                _element_update(oracle, theta, idx, angles, use_cf)
                k += 1
                counts[k] = oracle.count
                powers[k] = oracle.true_power(theta)
        self.final_reading_ = oracle.measure(theta)
        self.phases_ = theta
        self.trace_ = OptimizationTrace(counts, powers, theta.copy(), sweeps)
        self.n_measurements_ = oracle.count - start_count
        return self


class RandomSearchAligner(BaseEstimator):
    """Accept-if-better random probing: the measurement-cost benchmark.

    Visits elements round-robin. Each step redraws the visited element's
    phase uniformly on ``[0, 2*pi)``, takes one reading, and keeps the new
    configuration only if the reading strictly beats the best reading seen
    so far; otherwise the element snaps back. The incumbent's stored reading
    is never re-measured, so on a noisy meter a lucky upward fluctuation can
    entrench a mediocre configuration — that frailty is part of what the
    benchmark is for.

    Parameters
    ----------
    steps : int, default=1000
        Number of proposals; one reading each, plus one initial reading.
    init : {"zeros", "random"} or array-like, default="zeros"
        Starting phases.
    seed : int or None, default=None
        Drives the proposal stream (and ``init="random"``).

    Attributes
    ----------
    phases_ : ndarray
        Final accepted configuration.
    trace_ : OptimizationTrace
        Exact objective of the incumbent after every proposal.
    best_reading_ : float
        The stored (possibly noisy) reading defending the incumbent.
    n_measurements_ : int
        Readings consumed: ``steps + 1``.
    """

    def __init__(self, steps=1000, init="zeros", seed=None):
        self.steps = steps
        self.init = init
        self.seed = seed

    def fit(self, oracle):
        """Run the search against ``oracle`` (same interface as SequentialAligner)."""
        steps = int(self.steps)
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        n = oracle.n_elements
        rng = np.random.default_rng(self.seed)
        theta = _resolve_init(self.init, n, rng)
        proposals = rng.uniform(0.0, TWO_PI, size=steps)

        start_count = oracle.count
        counts = np.empty(steps + 1, dtype=np.int64)
        powers = np.empty(steps + 1, dtype=float)
        best_reading = oracle.measure(theta)
        current_power = oracle.true_power(theta)
        counts[0] = oracle.count
        powers[0] = current_power
        for step in range(steps):
            idx = step % n
            prev = theta[idx]
            theta[idx] = proposals[step]
            reading = oracle.measure(theta)
            if reading > best_reading:
                best_reading = reading
                current_power = oracle.true_power(theta)
            else:
                theta[idx] = prev
            counts[step + 1] = oracle.count
            powers[step + 1] = current_power
        self.phases_ = theta
        self.trace_ = OptimizationTrace(counts, powers, theta.copy(), steps // n)
        self.best_reading_ = best_reading
        self.n_measurements_ = oracle.count - start_count
        return self
