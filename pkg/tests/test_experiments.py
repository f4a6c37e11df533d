import json

import numpy as np
import pytest

from risalign import (
    ExperimentConfig,
    OptimizationTrace,
    aggregate_mean_curve,
    derive_seed,
    empirical_cdf,
    run_experiment,
    run_trial,
)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, 1, 2) == derive_seed(42, 1, 2)

    def test_order_sensitive(self):
        assert derive_seed(42, 1, 2) != derive_seed(42, 2, 1)

    def test_master_sensitive(self):
        assert derive_seed(42, 1) != derive_seed(43, 1)

    def test_returns_64_bit_value(self):
        s = derive_seed(123456789, 7, 3)
        assert 0 <= s < 2**64

    def test_no_collisions_in_small_grid(self):
        seen = {
            derive_seed(9, trial, tag)
            for trial in range(200)
            for tag in range(1, 6)
        }
        assert len(seen) == 1000


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.n_elements == 100
        assert cfg.sweeps == 5
        assert cfg.trials == 1000
        assert cfg.algorithm == "both"
        assert cfg.snr_db is None
        assert cfg.master_seed == 42
        assert cfg.baseline_steps == 3000
        assert cfg.init_policy == "zeros"

    def test_dict_round_trip_is_json_safe(self):
        cfg = ExperimentConfig(n_elements=7, snr_db=4.5, probe_angles=(0.1, 2.0, 4.0))
        payload = json.dumps(cfg.to_dict())
        assert ExperimentConfig.from_dict(json.loads(payload)) == cfg

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="n_elemnts"):
            ExperimentConfig.from_dict({"n_elemnts": 4})

    @pytest.mark.parametrize(
        "field_name,value",
        [
            ("n_elements", 0),
            ("sweeps", 0),
            ("trials", -1),
            ("baseline_steps", 0),
            ("algorithm", "annealing"),
            ("init_policy", "ones"),
            ("snr_db", float("nan")),
            ("probe_angles", (0.0, 0.0, 1.0)),
        ],
    )
    def test_validate_names_the_bad_field(self, field_name, value):
        cfg = ExperimentConfig(**{field_name: value})
        with pytest.raises(ValueError, match=field_name):
            cfg.validate()

    def test_validate_returns_self(self):
        cfg = ExperimentConfig(trials=2)
        assert cfg.validate() is cfg


class TestRunTrial:
    def test_bit_identical_reruns(self):
        cfg = ExperimentConfig(
            n_elements=12, sweeps=2, trials=4, baseline_steps=30,
            snr_db=6.0, master_seed=7,
        )
        a = run_trial(cfg, 2)
        b = run_trial(cfg, 2)
        assert a.power_bound == b.power_bound
        for key in ("sequential", "random"):
            assert np.array_equal(a.traces[key].counts, b.traces[key].counts)
            assert np.array_equal(a.traces[key].powers, b.traces[key].powers)
            assert np.array_equal(
                a.traces[key].final_phases, b.traces[key].final_phases
            )

    def test_single_element_is_trivially_optimal(self):
        cfg = ExperimentConfig(n_elements=1, sweeps=1, trials=1, baseline_steps=5)
        res = run_trial(cfg, 0)
        for trace in res.traces.values():
            assert trace.powers[-1] == pytest.approx(1.0, abs=1e-12)

    def test_measurement_grids(self):
        cfg = ExperimentConfig(n_elements=5, sweeps=3, trials=2, baseline_steps=17)
        res = run_trial(cfg, 1)
        assert np.array_equal(res.traces["sequential"].counts, np.arange(0, 46, 3))
        assert np.array_equal(res.traces["random"].counts, np.arange(1, 19))

    def test_algorithms_are_paired_but_noise_is_not_shared(self):
        cfg = ExperimentConfig(
            n_elements=8, sweeps=1, trials=1, baseline_steps=24, snr_db=8.0
        )
        res = run_trial(cfg, 0)
        seq, rnd = res.traces["sequential"], res.traces["random"]
        # same channel, same zero start: identical initial objective
        assert seq.powers[0] == rnd.powers[0]
        assert not np.array_equal(seq.final_phases, rnd.final_phases)

    def test_random_init_policy_is_shared_between_algorithms(self):
        cfg = ExperimentConfig(
            n_elements=6, sweeps=1, trials=1, baseline_steps=6, init_policy="random"
        )
        res = run_trial(cfg, 0)
        assert res.traces["sequential"].powers[0] == res.traces["random"].powers[0]
        assert res.traces["sequential"].powers[0] > 0.0

    def test_algorithm_selection(self):
        cfg = ExperimentConfig(n_elements=3, sweeps=1, trials=1, algorithm="sequential")
        assert set(run_trial(cfg, 0).traces) == {"sequential"}
        cfg = ExperimentConfig(
            n_elements=3, trials=1, algorithm="random", baseline_steps=5
        )
        assert set(run_trial(cfg, 0).traces) == {"random"}

    def test_out_of_range_index(self):
        cfg = ExperimentConfig(n_elements=2, trials=3, baseline_steps=2)
        with pytest.raises(ValueError):
            run_trial(cfg, 3)
        with pytest.raises(ValueError):
            run_trial(cfg, -1)

    def test_normalized_powers_stay_in_unit_range_noiseless(self):
        cfg = ExperimentConfig(n_elements=6, sweeps=2, trials=5, baseline_steps=40)
        for idx in range(5):
            res = run_trial(cfg, idx)
            for trace in res.traces.values():
                assert np.all(trace.powers >= 0.0)
                assert np.all(trace.powers <= 1.0 + 1e-9)


class TestRunExperiment:
    def test_matches_individual_trials(self):
        cfg = ExperimentConfig(n_elements=4, sweeps=1, trials=3, baseline_steps=9)
        res = run_experiment(cfg)
        one = run_trial(cfg, 1)
        assert np.array_equal(
            res.bundles["sequential"].powers[1], one.traces["sequential"].powers
        )
        assert np.array_equal(
            res.bundles["random"].powers[1], one.traces["random"].powers
        )
        assert res.power_bounds[1] == one.power_bound

    def test_bundle_shapes(self):
        cfg = ExperimentConfig(n_elements=4, sweeps=2, trials=6, baseline_steps=11)
        res = run_experiment(cfg)
        assert res.bundles["sequential"].powers.shape == (6, 9)
        assert res.bundles["random"].powers.shape == (6, 12)
        assert res.power_bounds.shape == (6,)

    def test_value_at_carries_last_value_forward(self):
        cfg = ExperimentConfig(
            n_elements=4, sweeps=1, trials=2, algorithm="sequential"
        )
        b = run_experiment(cfg).bundles["sequential"]  # grid 0, 3, 6, 9, 12
        assert np.array_equal(b.value_at(3), b.powers[:, 1])
        assert np.array_equal(b.value_at(4), b.powers[:, 1])
        assert np.array_equal(b.value_at(5), b.powers[:, 1])
        assert np.array_equal(b.value_at(10_000), b.powers[:, -1])
        with pytest.raises(ValueError):
            b.value_at(-1)

    def test_mean_curve_plateaus_noiseless(self):
        cfg = ExperimentConfig(n_elements=8, sweeps=3, trials=30, algorithm="sequential")
        curve = run_experiment(cfg).bundles["sequential"].mean_curve()
        assert np.all(np.diff(curve.mean) >= -1e-12)
        assert np.all(curve.mean <= 1.0 + 1e-9)
        assert curve.std_error.shape == curve.mean.shape
        assert np.all(curve.std_error >= 0.0)

    def test_one_sweep_on_headline_size_lands_near_optimum(self):
        cfg = ExperimentConfig(n_elements=100, sweeps=1, trials=2, algorithm="sequential")
        for idx in range(2):
            res = run_trial(cfg, idx)
            assert res.traces["sequential"].powers[-1] >= 0.95


class TestAggregateMeanCurve:
    def test_single_trace_passthrough(self):
        t = OptimizationTrace(np.array([0, 3]), np.array([0.2, 0.8]), np.zeros(1), 1)
        curve = aggregate_mean_curve([t])
        assert np.array_equal(curve.counts, [0, 3])
        assert np.array_equal(curve.mean, [0.2, 0.8])
        assert np.array_equal(curve.std_error, [0.0, 0.0])

    def test_two_traces_mean_and_std_error(self):
        t1 = OptimizationTrace(np.array([1, 2]), np.array([0.4, 0.4]), np.zeros(1), 0)
        t2 = OptimizationTrace(np.array([1, 2]), np.array([0.6, 0.6]), np.zeros(1), 0)
        curve = aggregate_mean_curve([t1, t2])
        assert np.allclose(curve.mean, [0.5, 0.5])
        # sample std of {0.4, 0.6} is sqrt(0.02); over sqrt(2) that is 0.1
        assert np.allclose(curve.std_error, [0.1, 0.1])

    def test_union_grid_with_carry_forward(self):
        t1 = OptimizationTrace(np.array([1, 3]), np.array([0.1, 0.3]), np.zeros(1), 0)
        t2 = OptimizationTrace(np.array([2, 4]), np.array([0.2, 0.4]), np.zeros(1), 0)
        curve = aggregate_mean_curve([t1, t2])
        # count 1 is dropped: trace 2 has no sample to carry there
        assert np.array_equal(curve.counts, [2, 3, 4])
        assert np.allclose(curve.mean, [0.15, 0.25, 0.35])

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            aggregate_mean_curve([])


class TestEmpiricalCdf:
    def test_single_value(self):
        table = empirical_cdf([0.5])
        assert np.array_equal(table.values, [0.5])
        assert np.array_equal(table.probabilities, [1.0])

    def test_two_values_sorted(self):
        table = empirical_cdf([0.4, 0.2])
        assert np.array_equal(table.values, [0.2, 0.4])
        assert np.array_equal(table.probabilities, [0.5, 1.0])

    def test_duplicates_merge(self):
        table = empirical_cdf([0.3, 0.3, 0.7])
        assert np.array_equal(table.values, [0.3, 0.7])
        assert np.allclose(table.probabilities, [2 / 3, 1.0])

    def test_last_probability_is_exactly_one(self):
        rng = np.random.default_rng(61)
        table = empirical_cdf(rng.uniform(size=137))
        assert table.probabilities[-1] == 1.0
        assert np.all(np.diff(table.probabilities) > 0)
        assert np.all(np.diff(table.values) > 0)

    @pytest.mark.parametrize("bad", [[], [np.nan], [1.0, np.inf]])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(ValueError):
            empirical_cdf(bad)
