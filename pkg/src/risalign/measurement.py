"""Black-box power meter: the only view the optimizers get of the channel.

The meter owns the hidden effective gains and answers phase configurations
with scalar power readings, optionally corrupted by receiver noise. It also
counts every reading, so convergence can be reported against measurement
cost rather than wall time.
"""

from dataclasses import dataclass

import numpy as np

from .channel import received_power
from .validation import check_gains


@dataclass(frozen=True)
class MeasurementRecord:
    """One oracle query: running count, probed configuration, and reading."""

    index: int
    phases: np.ndarray
    reading: float


def noise_variance(gains, snr_db):
    """Total complex-noise variance giving the requested SNR in dB.

    The SNR is referenced to the average per-element gain power
    ``sum_k |z_k|^2 / n``: it describes the receiver relative to the signal
    a typical single element contributes, not the fully aligned aggregate.
    The reference does not depend on the phase configuration, so one
    setting yields one noise level for the whole run; with unit-variance
    gains, ``snr_db=10`` puts the variance near 0.1. ``snr_db=None`` or
    ``+inf`` disables noise (returns ``0.0``).
    """
    if snr_db is None:
        return 0.0
    gains = check_gains(gains)
    snr_db = float(snr_db)
    if np.isnan(snr_db):
        raise ValueError("snr_db must not be NaN")
    ratio = 10.0 ** (snr_db / 10.0)
    if np.isinf(ratio):
        return 0.0
    per_element = float(np.mean(gains.real**2 + gains.imag**2))
    return per_element / ratio


class PowerMeter:
    """Measurement oracle mapping a phase configuration to a power reading.

    Noiseless readings equal :func:`risalign.channel.received_power` exactly.
    With ``snr_db`` set, an independent circularly-symmetric Gaussian sample
    of variance :func:`noise_variance` is added to the combined field before
    the square-law detector, and a fresh sample is drawn on every call —
    repeating a configuration re-measures it.

    Parameters
    ----------
    gains : array-like of complex
        Hidden effective gains, one per element.
    snr_db : float or None, default=None
        Signal-to-noise ratio in dB; ``None`` means a noiseless meter.
    seed : int or None, default=None
        Seed for the noise stream. Irrelevant when the meter is noiseless.
    """

    def __init__(self, gains, snr_db=None, seed=None):
        self._gains = check_gains(gains).copy()
        self.snr_db = snr_db
        self._sigma2 = noise_variance(self._gains, snr_db)
        # variance splits evenly between the quadrature components
        self._noise_scale = float(np.sqrt(self._sigma2 / 2.0))
        self._rng = np.random.default_rng(seed)
        self._count = 0

    @property
    def n_elements(self):
        return self._gains.size

    @property
    def count(self):
        """Number of readings taken so far."""
        return self._count

    @property
    def noise_power(self):
        """Total variance of the additive complex noise (0 when noiseless)."""
        return self._sigma2

    def measure(self, phases):
        """Take one power reading at ``phases`` and advance the counter."""
        phases = np.asarray(phases, dtype=float)
        if phases.shape != self._gains.shape:
            raise ValueError(
                f"expected {self._gains.size} phases, got shape {phases.shape}"
            )
        s = np.dot(self._gains, np.exp(1j * phases))
        if self._noise_scale > 0.0:
            w = self._rng.standard_normal(2)
            s = s + self._noise_scale * complex(w[0], w[1])
        self._count += 1
        return float(s.real * s.real + s.imag * s.imag)

    def true_power(self, phases):
        """Exact objective at ``phases``; diagnostic only, consumes no reading.

        This is simulator-side instrumentation for tracing what a run really
        achieved — an optimizer restricted to measurements must not call it.
        """
        return received_power(self._gains, phases)
