"""Shared fixtures and helpers for the risalign test suite."""

import numpy as np
import pytest

from risalign import ExperimentConfig, run_experiment

# Verdict lines appended by the acceptance tests; echoed in the terminal
# summary so a plain ``pytest -v`` run always shows them.
ACCEPTANCE_LINES = []


def circ_dist(a, b):
    """Absolute circular distance between angles, elementwise, in [0, pi]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(np.angle(np.exp(1j * (a - b))))


def random_scene(rng, n):
    """Unit-variance circular complex gains, the stock test channel."""
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


@pytest.fixture(scope="session")
def headline_experiment():
    """The main comparison run: 1000 noiseless trials, both algorithms.

    This is the expensive fixture (about half a minute); three acceptance
    criteria and several distribution checks all read from it, so it is
    built once per session. The defaults of ExperimentConfig are exactly
    the headline setup: 100 elements, 5 sweeps, 3000 baseline steps.
    """
    return run_experiment(ExperimentConfig())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
