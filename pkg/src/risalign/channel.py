"""Complex effective-gain channel model and the known-gain optimum.

The physical picture: a transmitter radiates toward a surface of ``n``
passive elements, each of which re-emits its incident signal with a
controllable phase shift. At the receiver the contributions superpose, so
the delivered power for a phase configuration ``theta`` is

    f(theta) = | sum_k z_k * exp(1j * theta[k]) |**2

where ``z_k`` is the effective complex gain of element ``k`` (transmit
amplitude times the cascade of the forward and reflected channel
coefficients). Everything downstream of this module treats ``z`` as hidden
state; only this module and the verification helpers ever touch it directly.
"""

import numpy as np

from .validation import check_gains, check_phases, wrap_phase


def generate_channels(n, seed):
    """Draw ``n`` i.i.d. circularly-symmetric complex Gaussian coefficients.

    Each coefficient has independent real and imaginary parts of variance
    1/2, so the magnitudes are Rayleigh with ``E|h|^2 = 1``. Deterministic
    for a fixed ``seed``.

    Parameters
    ----------
    n : int
        Number of coefficients, at least 1.
    seed : int
        Seed for the underlying generator.

    Returns
    -------
    ndarray of complex, shape (n,)
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return (re + 1j * im) / np.sqrt(2.0)


def compose_effective_gains(transmit_power, forward, reflected=None):
    """Combine link coefficients into per-element effective gains.

    With only ``forward`` given, element ``k`` contributes
    ``transmit_power * forward[k]`` (single-hop harvesting at the surface).
    With ``reflected`` also given, the two hops cascade:
    ``transmit_power * forward[k] * reflected[k]``.

    Parameters
    ----------
    transmit_power : float
        Scales every element identically; must be positive and finite.
    forward : array-like of complex
        Transmitter-to-element coefficients.
    reflected : array-like of complex, optional
        Element-to-receiver coefficients, same length as ``forward``.
    """
    amp = float(transmit_power)
    if not np.isfinite(amp) or amp <= 0.0:
        raise ValueError(f"transmit_power must be positive and finite, got {amp}")
    fwd = check_gains(forward)
    if reflected is None:
        return amp * fwd
    ref = check_gains(reflected)
    if ref.size != fwd.size:
        raise ValueError(
            f"forward and reflected lengths differ: {fwd.size} vs {ref.size}"
        )
    return amp * fwd * ref


def received_power(gains, phases):
    """Exact delivered power ``|sum_k gains[k] * exp(1j*phases[k])|**2``.

    Nonnegative, invariant under a common phase shift of all elements, and
    bounded above by :func:`optimal_power_bound`.
    """
    gains = check_gains(gains)
    phases = check_phases(phases, n=gains.size)
    s = np.dot(gains, np.exp(1j * phases))
    return float(s.real * s.real + s.imag * s.imag)


def optimal_power_bound(gains):
    """Largest power any phase configuration can deliver: ``(sum_k |z_k|)**2``.

    Attained exactly by :func:`optimal_phases`, which rotates every
    contribution onto a common ray.
    """
    gains = check_gains(gains)
    return float(np.abs(gains).sum() ** 2)


def optimal_phases(gains, reference_phase=0.0):
    """Phase configuration attaining :func:`optimal_power_bound`.

    Element ``k`` gets ``reference_phase - arg(gains[k])`` wrapped into
    ``[0, 2*pi)``, so every rotated contribution points along the
    ``reference_phase`` ray. The optimum is a one-parameter family;
    ``reference_phase`` selects the member. Elements with exactly zero gain
    contribute nothing and are pinned to phase ``0.0``.
    """
    gains = check_gains(gains)
    phases = wrap_phase(float(reference_phase) - np.angle(gains))
    return np.where(gains == 0, 0.0, phases)
