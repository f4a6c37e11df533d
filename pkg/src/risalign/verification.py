"""Self-check suites: cross-validate the optimizers against the verifiers.

Each suite is independent of the code it checks — the brute-force grid and
the analytic bound sandwich the optimizer from both sides, and the solver
equivalence check pits the closed-form update against the general linear
solve on randomly drawn two-element scenes. The CLI's ``verify`` subcommand
runs all of them and reports a pass/fail table.
"""

from dataclasses import dataclass

import numpy as np

from .align import (
    SequentialAligner,
    closed_form_update,
    solve_three_point,
)
from .channel import generate_channels, optimal_power_bound
from .experiments import derive_seed
from .measurement import PowerMeter
from .reference import brute_force_max, check_fixed_point_alignment

#: Brute force beyond 3 elements is not tractable at useful resolutions.
MAX_VERIFY_N = 3

_CANONICAL = (0.0, np.pi / 2.0, np.pi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _circular_distance(a, b):
    return float(np.abs(np.angle(np.exp(1j * (np.asarray(a) - np.asarray(b))))).max())


def check_solver_equivalence(seed=0, pairs=10000,
                             solver=solve_three_point, update=closed_form_update):
    """Closed-form vs general solver, plus recovery of the known optimum.

    Draws random (anchor, element) gain pairs, computes exact probe powers
    at offsets ``(0, pi/2, pi)``, and requires (a) the two solvers to agree
    to 1e-12 and (b) the recovered offset to match the analytic optimum
    ``arg(anchor * conj(element))`` to 1e-9, both as circular distances.
    ``solver`` and ``update`` are injectable so a harness can prove this
    check actually fails on a corrupted build.
    """
    rng = np.random.default_rng(seed)
    z0 = (rng.standard_normal(pairs) + 1j * rng.standard_normal(pairs)) / np.sqrt(2)
    z = (rng.standard_normal(pairs) + 1j * rng.standard_normal(pairs)) / np.sqrt(2)
    y1 = np.abs(z0 + z) ** 2
    y2 = np.abs(z0 + 1j * z) ** 2
    y3 = np.abs(z0 - z) ** 2
    expected = np.angle(z0 * np.conj(z))
    worst_agreement = 0.0
    worst_recovery = 0.0
    for i in range(pairs):
        via_update = update(y1[i], y2[i], y3[i])
        via_solver = solver(_CANONICAL, y1[i], y2[i], y3[i])
        worst_agreement = max(worst_agreement,
                              _circular_distance(via_update, via_solver))
        worst_recovery = max(worst_recovery,
                             _circular_distance(via_update, expected[i]))
    passed = worst_agreement <= 1e-12 and worst_recovery <= 1e-9
    detail = (f"{pairs} pairs: closed-form vs solve deviation {worst_agreement:.2e}, "
              f"optimum recovery error {worst_recovery:.2e}")
    return CheckResult("solver-equivalence", passed, detail)


def check_oracle_sandwich(max_n=MAX_VERIFY_N, seed=0, instances=20):
    """Sequential result sandwiched between the grid maximum and the bound.

    For each element count up to ``max_n``: the exhaustive grid maximum must
    not exceed the analytic bound, the sequential optimizer (5 sweeps,
    noiseless) must reach at least the grid maximum less a 1e-6 relative
    margin, and must not exceed the bound. Also checks on two-element scenes
    that the grid maximum tightens toward the bound as resolution grows.
    """
    if not 1 <= max_n <= MAX_VERIFY_N:
        raise ValueError(f"max_n must be in [1, {MAX_VERIFY_N}], got {max_n}")
    worst_excess = -np.inf  # brute - bound, must stay <= 0 (mod rounding)
    worst_margin = np.inf   # sequential - (brute - 1e-6 * bound)
    for n in range(1, max_n + 1):
        for i in range(instances):
            gains = generate_channels(n, derive_seed(seed, 100 + n, i))
            bound = optimal_power_bound(gains)
            grid_max, _ = brute_force_max(gains, 64)
            est = SequentialAligner(sweeps=5).fit(PowerMeter(gains))
            final = est.trace_.final_power
            worst_excess = max(worst_excess, (grid_max - bound) / bound)
            worst_margin = min(worst_margin,
                               (final - (grid_max - 1e-6 * bound)) / bound)
            if final > bound * (1 + 1e-12):
                worst_margin = -np.inf
    shrinking = True
    for i in range(5):
        gains = generate_channels(2, derive_seed(seed, 200, i))
        bound = optimal_power_bound(gains)
        gaps = [bound - brute_force_max(gains, k)[0] for k in (8, 32, 128)]
        if not (gaps[0] + 1e-12 * bound >= gaps[1] >= gaps[2] - 1e-12 * bound):
            shrinking = False
    passed = worst_excess <= 1e-12 and worst_margin >= 0.0 and shrinking
    detail = (f"n <= {max_n}, {instances} instances each: grid-vs-bound excess "
              f"{worst_excess:.2e}, sequential margin over grid {worst_margin:.2e}, "
              f"grid gap shrinking: {shrinking}")
    return CheckResult("oracle-sandwich", passed, detail)


def check_alignment_suite(seed=0, instances=30, sweeps=20):
    """After enough sweeps the configuration is a fully aligned fixed point.

    Runs the sequential optimizer for ``sweeps`` noiseless sweeps on random
    scenes of 2–8 elements and requires every rotated gain to share one
    argument to within 1e-6 rad, with delivered power within 1e-9 relative
    of the analytic optimum.
    """
    worst_shortfall = 0.0
    all_aligned = True
    for i in range(instances):
        n = 2 + (i % 7)
        gains = generate_channels(n, derive_seed(seed, 300, i))
        bound = optimal_power_bound(gains)
        est = SequentialAligner(sweeps=sweeps).fit(PowerMeter(gains))
        if not check_fixed_point_alignment(gains, est.phases_, tol=1e-6):
            all_aligned = False
        worst_shortfall = max(worst_shortfall, 1.0 - est.trace_.final_power / bound)
    passed = all_aligned and worst_shortfall <= 1e-9
    detail = (f"{instances} scenes (2-8 elements, {sweeps} sweeps): aligned "
              f"to 1e-6: {all_aligned}, worst relative power shortfall "
              f"{worst_shortfall:.2e}")
    return CheckResult("fixed-point-alignment", passed, detail)


def run_verification(max_n=MAX_VERIFY_N, seed=0,
                     solver=solve_three_point, update=closed_form_update):
    """Run all three suites; ``max_n`` caps the brute-force dimensions."""
    if not 1 <= int(max_n) <= MAX_VERIFY_N:
        raise ValueError(
            f"max_n must be in [1, {MAX_VERIFY_N}] (brute-force tractability cap), "
            f"got {max_n}"
        )
    return [
        check_solver_equivalence(seed=seed, solver=solver, update=update),
        check_oracle_sandwich(max_n=int(max_n), seed=seed),
        check_alignment_suite(seed=seed),
    ]
