"""Seeded Monte-Carlo harness: convergence curves and delivered-power CDFs.

A single :class:`ExperimentConfig` fully determines an experiment — channel
draws, initial phases, measurement noise, and baseline proposals all come
from child seeds derived from ``master_seed``, so re-running a config
reproduces every trace bit for bit, and the two algorithms inside one trial
face the same channel and the same starting point with independent noise.
"""

from dataclasses import dataclass, field, fields

import numpy as np

from .align import (
    DEFAULT_PROBE_ANGLES,
    OptimizationTrace,
    RandomSearchAligner,
    SequentialAligner,
    _check_probe_angles,
)
from .channel import generate_channels, optimal_power_bound
from .measurement import PowerMeter
from .validation import TWO_PI

ALGORITHMS = ("sequential", "random", "both")
INIT_POLICIES = ("zeros", "random")

_MASK = (1 << 64) - 1
# fixed tags so every consumer of randomness inside a trial gets its own
# independent child stream
_STREAM_CHANNEL = 1
_STREAM_INIT = 2
_STREAM_SEQ_NOISE = 3
_STREAM_RAND_NOISE = 4
_STREAM_PROPOSALS = 5


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master_seed, *stream):
    """Mix a master seed with integer stream tags into a 64-bit child seed.

    Order-sensitive and avalanching, so ``(seed, trial, tag)`` triples that
    differ anywhere give unrelated children. This is what keeps trials
    reproducible individually: trial ``i`` can be re-run alone and must
    match its run inside the full experiment.
    """
    state = _splitmix64(int(master_seed) & _MASK)
    for part in stream:
        state = _splitmix64(state ^ _splitmix64(int(part) & _MASK))
    return state


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that defines one Monte-Carlo experiment.

    Results are a pure function of this object. ``snr_db=None`` means
    noiseless meters; ``baseline_steps`` only matters when the random-search
    baseline runs ("random" or "both").
    """

    n_elements: int = 100
    sweeps: int = 5
    trials: int = 1000
    algorithm: str = "both"
    snr_db: float | None = None
    master_seed: int = 42
    baseline_steps: int = 3000
    init_policy: str = "zeros"
    probe_angles: tuple = field(default=DEFAULT_PROBE_ANGLES)

    def validate(self):
        if int(self.n_elements) < 1:
            raise ValueError(f"n_elements must be >= 1, got {self.n_elements}")
        if int(self.sweeps) < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if int(self.trials) < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}"
            )
        if self.snr_db is not None:
            snr = float(self.snr_db)
            if np.isnan(snr):
                raise ValueError("snr_db must not be NaN")
        if int(self.baseline_steps) < 1:
            raise ValueError(f"baseline_steps must be >= 1, got {self.baseline_steps}")
        if self.init_policy not in INIT_POLICIES:
            raise ValueError(
                f"init_policy must be one of {INIT_POLICIES}, got {self.init_policy!r}"
            )
        try:
            _check_probe_angles(self.probe_angles)
        except ValueError as exc:
            raise type(exc)(f"probe_angles: {exc}") from None
        return self

    def to_dict(self):
        """JSON-ready dict of the resolved configuration."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data):
        """Build a config from a dict, rejecting unknown keys."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(data)
        if "probe_angles" in kwargs and kwargs["probe_angles"] is not None:
            kwargs["probe_angles"] = tuple(kwargs["probe_angles"])
        return cls(**kwargs)


@dataclass(frozen=True)
class TrialResult:
    """One trial's traces, with powers normalized by the trial's optimum."""

    trial_index: int
    power_bound: float
    traces: dict


def _normalized(trace, bound):
    return OptimizationTrace(
        counts=trace.counts,
        powers=np.asarray(trace.powers, dtype=float) / bound,
        final_phases=trace.final_phases,
        sweeps_completed=trace.sweeps_completed,
    )


def run_trial(config, trial_index):
    """Run one trial: draw a channel, run the configured algorithm(s) on it.

    Both algorithms see the same channel and the same initial phases but
    independent noise and proposal streams, so per-trial comparisons are
    paired. Traces come back normalized by the trial's analytic optimum, so
    1.0 means the channel's full power was captured.
    """
    config.validate()
    idx = int(trial_index)
    if not 0 <= idx < int(config.trials):
        raise ValueError(
            f"trial_index must be in [0, {config.trials}), got {trial_index}"
        )
    seed = config.master_seed
    n = int(config.n_elements)
    gains = generate_channels(n, derive_seed(seed, idx, _STREAM_CHANNEL))
    bound = optimal_power_bound(gains)
    if config.init_policy == "random":
        init_rng = np.random.default_rng(derive_seed(seed, idx, _STREAM_INIT))
        init = init_rng.uniform(0.0, TWO_PI, size=n)
    else:
        init = np.zeros(n)

    traces = {}
    if config.algorithm in ("sequential", "both"):
        meter = PowerMeter(
            gains, snr_db=config.snr_db, seed=derive_seed(seed, idx, _STREAM_SEQ_NOISE)
        )
        est = SequentialAligner(
            sweeps=config.sweeps, probe_angles=config.probe_angles, init=init
        ).fit(meter)
        traces["sequential"] = _normalized(est.trace_, bound)
    if config.algorithm in ("random", "both"):
        meter = PowerMeter(
            gains, snr_db=config.snr_db, seed=derive_seed(seed, idx, _STREAM_RAND_NOISE)
        )
        est = RandomSearchAligner(
            steps=config.baseline_steps,
            init=init,
            seed=derive_seed(seed, idx, _STREAM_PROPOSALS),
        ).fit(meter)
        traces["random"] = _normalized(est.trace_, bound)
    return TrialResult(idx, bound, traces)


@dataclass(frozen=True)
class TraceBundle:
    """All trials' traces for one algorithm, on a shared measurement grid."""

    counts: np.ndarray
    powers: np.ndarray  # shape (trials, len(counts)), normalized

    def value_at(self, count):
        """Per-trial normalized power at a measurement count (last value carried
        forward when ``count`` falls between samples)."""
        pos = int(np.searchsorted(self.counts, count, side="right")) - 1
        if pos < 0:
            raise ValueError(
                f"count {count} precedes the first trace sample ({self.counts[0]})"
            )
        return self.powers[:, pos]

    def mean_curve(self):
        trials = self.powers.shape[0]
        if trials > 1:
            se = self.powers.std(axis=0, ddof=1) / np.sqrt(trials)
        else:
            se = np.zeros(self.powers.shape[1])
        return AggregateCurve(self.counts, self.powers.mean(axis=0), se)


@dataclass(frozen=True)
class ExperimentResult:
    """Everything a full experiment produced, keyed by algorithm name."""

    config: ExperimentConfig
    power_bounds: np.ndarray
    bundles: dict


def run_experiment(config):
    """Run every trial of ``config`` and stack the traces per algorithm.

    Trials run sequentially in index order; since each trial is seeded
    independently of the others, the output is identical to running any
    subset by hand with :func:`run_trial`.
    """
    config.validate()
    trials = int(config.trials)
    bounds = np.empty(trials)
    stacks = {}
    for idx in range(trials):
        result = run_trial(config, idx)
        bounds[idx] = result.power_bound
        for name, trace in result.traces.items():
            stacks.setdefault(name, []).append(trace)
    bundles = {}
    for name, traces in stacks.items():
        counts = traces[0].counts
        bundles[name] = TraceBundle(
            counts=np.asarray(counts, dtype=np.int64),
            powers=np.stack([t.powers for t in traces]),
        )
    return ExperimentResult(config=config, power_bounds=bounds, bundles=bundles)


@dataclass(frozen=True)
class AggregateCurve:
    """Mean normalized power (with standard error) vs measurement count."""

    counts: np.ndarray
    mean: np.ndarray
    std_error: np.ndarray


def aggregate_mean_curve(traces):
    """Average a list of traces onto the union of their measurement grids.

    Between samples a trace is piecewise constant (the configuration only
    changes at an update), so off-grid points use the last value carried
    forward. Grid points before a trace's first sample are dropped — there
    is nothing to carry. Standard error is the sample standard deviation
    (ddof=1) over trials divided by ``sqrt(trials)``; zero for one trial.
    """
    traces = list(traces)
    if not traces:
        raise ValueError("need at least one trace to aggregate")
    counts_list = [np.asarray(t.counts) for t in traces]
    first = counts_list[0]
    if all(c.shape == first.shape and np.array_equal(c, first) for c in counts_list):
        grid = first
        matrix = np.stack([np.asarray(t.powers, dtype=float) for t in traces])
    else:
        grid = np.unique(np.concatenate(counts_list))
        grid = grid[grid >= max(int(c[0]) for c in counts_list)]
        rows = []
        for t, c in zip(traces, counts_list):
            pos = np.searchsorted(c, grid, side="right") - 1
            rows.append(np.asarray(t.powers, dtype=float)[pos])
        matrix = np.stack(rows)
    mean = matrix.mean(axis=0)
    if matrix.shape[0] > 1:
        se = matrix.std(axis=0, ddof=1) / np.sqrt(matrix.shape[0])
    else:
        se = np.zeros(matrix.shape[1])
    return AggregateCurve(np.asarray(grid), mean, se)


@dataclass(frozen=True)
class CdfTable:
    """Empirical CDF: ``probability[i]`` = fraction of values <= ``value[i]``."""

    values: np.ndarray
    probabilities: np.ndarray


def empirical_cdf(values):
    """Empirical CDF of a sample; right-continuous, last probability exactly 1."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    uniq, counts = np.unique(arr, return_counts=True)
    return CdfTable(uniq, np.cumsum(counts) / arr.size)
