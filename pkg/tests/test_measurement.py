import numpy as np
import pytest

from conftest import random_scene
from risalign import MeasurementRecord, PowerMeter, noise_variance, received_power


def test_counter_increments_per_probe():
    meter = PowerMeter([1 + 0j, 1 + 0j])
    assert meter.count == 0
    reading = meter.measure([0.0, 0.0])
    assert reading == 4.0
    assert meter.count == 1
    for k in range(2, 12):
        meter.measure([0.0, 0.0])
        assert meter.count == k


def test_dimension_mismatch():
    meter = PowerMeter([1 + 0j])
    with pytest.raises(ValueError):
        meter.measure([0.0, 0.0])


def test_n_elements_property():
    assert PowerMeter([1 + 0j, 1j, -1j]).n_elements == 3


def test_noiseless_reading_equals_received_power_exactly():
    # Bit-for-bit: both paths must run the identical kernel.
    rng = np.random.default_rng(21)
    z = random_scene(rng, 9)
    meter = PowerMeter(z)
    for _ in range(50):
        theta = rng.uniform(0.0, 2 * np.pi, 9)
        assert meter.measure(theta) == received_power(z, theta)


def test_infinite_snr_is_noiseless():
    rng = np.random.default_rng(22)
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    theta = rng.uniform(0.0, 2 * np.pi, 4)
    noisy = PowerMeter(z, snr_db=np.inf, seed=1)
    clean = PowerMeter(z)
    assert noisy.noise_power == 0.0
    assert noisy.measure(theta) == clean.measure(theta)


def test_noise_variance_reference_values():
    assert noise_variance([1 + 0j], 0.0) == 1.0
    assert noise_variance([10j], 10.0) == pytest.approx(10.0, rel=1e-12)
    assert noise_variance([1 + 0j], np.inf) == 0.0
    assert noise_variance([1 + 0j], None) == 0.0


def test_noise_variance_tracks_per_element_mean():
    # 100 unit-magnitude gains at 10 dB: variance is 1/10, not 10 —
    # the reference level is mean per-element power, so it does not
    # grow with the array size.
    z = np.full(100, 1 + 0j)
    assert noise_variance(z, 10.0) == pytest.approx(0.1, rel=1e-12)
    assert noise_variance(z, 10.0) == pytest.approx(
        noise_variance([1 + 0j], 10.0), rel=1e-12
    )


def test_noise_variance_rejects_nan():
    with pytest.raises(ValueError):
        noise_variance([1 + 0j], np.nan)


def test_noisy_reading_mean_and_count():
    z = np.array([2 + 1j, -1 + 0.5j])
    theta = np.array([0.4, 5.1])
    s2 = noise_variance(z, 3.0)
    f = received_power(z, theta)
    meter = PowerMeter(z, snr_db=3.0, seed=99)
    k = 100_000
    readings = np.array([meter.measure(theta) for _ in range(k)])
    assert meter.count == k
    # E|s+w|^2 = f + s2;  Var|s+w|^2 = s2^2 + 2*s2*f for circular noise
    se = np.sqrt(s2**2 + 2 * s2 * f) / np.sqrt(k)
    assert abs(readings.mean() - (f + s2)) < 3 * se


def test_fresh_noise_every_call():
    meter = PowerMeter([1 + 0j], snr_db=0.0, seed=5)
    readings = [meter.measure([0.0]) for _ in range(8)]
    assert len(set(readings)) == 8


def test_noise_stream_is_seeded():
    z = [1 + 2j, 0.5 - 1j]
    theta = [0.1, 0.2]
    a = PowerMeter(z, snr_db=5.0, seed=123)
    b = PowerMeter(z, snr_db=5.0, seed=123)
    c = PowerMeter(z, snr_db=5.0, seed=124)
    ra = [a.measure(theta) for _ in range(5)]
    rb = [b.measure(theta) for _ in range(5)]
    rc = [c.measure(theta) for _ in range(5)]
    assert ra == rb
    assert ra != rc


def test_true_power_does_not_touch_the_counter():
    z = [1 + 0j, 1j]
    meter = PowerMeter(z, snr_db=2.0, seed=0)
    theta = np.array([0.0, 1.0])
    assert meter.true_power(theta) == received_power(z, theta)
    assert meter.count == 0
    meter.measure(theta)
    meter.true_power(theta)
    assert meter.count == 1


def test_readings_stay_nonnegative_under_heavy_noise():
    meter = PowerMeter([0.01 + 0j], snr_db=-20.0, seed=7)
    assert all(meter.measure([0.0]) >= 0.0 for _ in range(200))


def test_measurement_record_is_frozen():
    rec = MeasurementRecord(index=3, phases=np.zeros(2), reading=1.5)
    assert rec.index == 3
    assert rec.reading == 1.5
    with pytest.raises(AttributeError):
        rec.reading = 2.0
