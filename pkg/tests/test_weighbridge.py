import dataclasses

import pytest
from hypothesis import given, strategies as st

from dovermcda import weighbridge as wb
from dovermcda.costs import default_options
from dovermcda.scenarios import (
    build_scenario_set,
    default_ltp_distribution,
    default_vtg_distribution,
)
from dovermcda.weighbridge import (
    ConfigurationError,
    DelaySpec,
    SimConfig,
    dissatisfaction,
    temporal_ltp,
)
from dovermcda.weighbridge.model import kernel_params

OPTIONS = default_options()
TREE = build_scenario_set(default_vtg_distribution(), default_ltp_distribution())
FAST = SimConfig(run_days=3, warmup_days=1, replications=2)


class TestTemporalLtp:
    def test_peak_share(self):
        assert temporal_ltp(14.0, 44.17, SimConfig()) == 75.0

    def test_off_peak_share(self):
        assert temporal_ltp(3.0, 44.17, SimConfig()) == pytest.approx(33.9, abs=0.05)

    @given(st.floats(min_value=18.75, max_value=81.25))
    def test_daily_average_is_the_daily_share(self, ltp):
        config = SimConfig()
        peak_hours = config.peak_end_hour - config.peak_start_hour
        mean = (
            peak_hours * temporal_ltp(13.0, ltp, config)
            + (24 - peak_hours) * temporal_ltp(2.0, ltp, config)
        ) / 24.0
        assert mean == pytest.approx(ltp, abs=1e-9)

    def test_incompatible_daily_share_rejected(self):
        with pytest.raises(ConfigurationError, match="incompatible"):
            temporal_ltp(3.0, 10.0, SimConfig())

    def test_hour_out_of_range(self):
        with pytest.raises(ValueError):
            temporal_ltp(24.0, 44.17, SimConfig())


class TestDissatisfaction:
    @pytest.mark.parametrize(
        "temper,alone,kind,expected",
        [
            (False, False, 0, 0), (False, False, 1, 20), (False, False, 2, 50),
            (False, True, 0, 0), (False, True, 1, 50), (False, True, 2, 80),
            (True, False, 0, 0), (True, False, 1, 40), (True, False, 2, 70),
            (True, True, 0, 0), (True, True, 1, 70), (True, True, 2, 100),
        ],
    )
    def test_table(self, temper, alone, kind, expected):
        assert dissatisfaction(temper, alone, kind) == expected

    def test_invalid_kind(self):
        with pytest.raises(ValueError):
            dissatisfaction(False, False, 3)


class TestSimConfig:
    def test_defaults_valid(self):
        SimConfig()

    def test_warmup_must_be_shorter(self):
        with pytest.raises(ConfigurationError, match="warmup"):
            SimConfig(run_days=5, warmup_days=5)

    def test_paper_scale(self):
        full = SimConfig().paper_scale()
        assert (full.run_days, full.warmup_days, full.replications) == (365, 20, 10_000)

    def test_incompatible_ltp_surfaces_in_params(self):
        scenario = dataclasses.replace(TREE.by_id(1), ltp=10.0)
        with pytest.raises(ConfigurationError, match="incompatible"):
            kernel_params(OPTIONS[0], scenario, SimConfig())


class TestSimulateOnce:
    def test_deterministic(self):
        a = wb.simulate_once(OPTIONS[0], TREE.by_id(5), FAST, seed=7)
        b = wb.simulate_once(OPTIONS[0], TREE.by_id(5), FAST, seed=7)
        assert a == b

    def test_seed_changes_results(self):
        a = wb.simulate_once(OPTIONS[0], TREE.by_id(9), FAST, seed=7)
        b = wb.simulate_once(OPTIONS[0], TREE.by_id(9), FAST, seed=8)
        assert a != b

    def test_uncongested_cells_see_no_queueing(self):
        for opt, sid in [(OPTIONS[0], 1), (OPTIONS[1], 5)]:
            stats = wb.simulate_once(opt, TREE.by_id(sid), FAST, seed=3)
            assert stats.queue_pct == 0.0
            assert stats.passive_pct == 0.0
            assert stats.dissat_pct == 0.0

    def test_overload_scenario_queues_heavily(self):
        stats = wb.simulate_once(OPTIONS[0], TREE.by_id(9), FAST, seed=3)
        assert stats.queue_pct > 20.0
        assert 0.0 < stats.passive_pct < stats.queue_pct

    def test_customers_counted_after_warmup_only(self):
        stats = wb.simulate_once(OPTIONS[0], TREE.by_id(1), FAST, seed=3)
        expected = (FAST.run_days - FAST.warmup_days) * 86400 * 4.57 / 60
        assert stats.customers == pytest.approx(expected, rel=0.01)


@pytest.mark.skipif("kernel" not in wb.available_backends(),
                    reason="compiled kernel not built")
class TestBackendParity:
    MODES = [
        {},
        {"arrival_mode": "poisson"},
        {"vehicle_mix_mode": "bernoulli"},
        {"arrival_mode": "poisson", "vehicle_mix_mode": "bernoulli"},
        {"gate_mode": "total"},
        {"pre_weighbridge_travel": DelaySpec("normal", 60.0, 15.0),
         "merge_delay": DelaySpec("uniform", 2.0, 9.0)},
        {"pre_weighbridge_travel": DelaySpec("exponential", 60.0)},
    ]

    @pytest.mark.parametrize("mode", MODES)
    def test_backends_agree_bit_for_bit(self, mode):
        config = dataclasses.replace(FAST, **mode)
        for sid in (1, 9):
            for opt in OPTIONS:
                pure = wb.simulate_once(opt, TREE.by_id(sid), config, seed=11, backend="pure")
                fast = wb.simulate_once(opt, TREE.by_id(sid), config, seed=11, backend="kernel")
                assert pure == fast, f"backend mismatch at option {opt.id} scenario {sid}"

    def test_replicated_agrees(self):
        a = wb.simulate_replicated(OPTIONS[2], TREE.by_id(6), FAST, 13, backend="pure")
        b = wb.simulate_replicated(OPTIONS[2], TREE.by_id(6), FAST, 13, backend="kernel")
        assert a == b


@pytest.fixture(scope="module")
def recorded_run():
    return wb.simulate_once_with_customers(OPTIONS[0], TREE.by_id(9), FAST, seed=21)


class TestCustomerRecords:
    def test_invariants(self, recorded_run):
        _, records = recorded_run
        for r in records:
            assert r.dissatisfaction in (0, 20, 40, 50, 70, 80, 100)
            if r.passive_queued:
                assert r.queued
            if not r.queued:
                assert r.dissatisfaction == 0

    def test_records_reproduce_statistics(self, recorded_run):
        stats, records = recorded_run
        n = len(records)
        assert n == stats.customers
        assert 100.0 * sum(r.queued for r in records) / n == pytest.approx(stats.queue_pct)
        assert 100.0 * sum(r.passive_queued for r in records) / n == pytest.approx(stats.passive_pct)
        assert sum(r.dissatisfaction for r in records) / n == pytest.approx(stats.dissat_pct)

    def test_mix_roughly_matches_daily_share(self, recorded_run):
        _, records = recorded_run
        lorries = sum(r.vehicle_type == "lorry" for r in records)
        assert lorries / len(records) == pytest.approx(0.4859, abs=0.01)


class TestReplication:
    def test_single_replication_equals_simulate_once(self):
        config = dataclasses.replace(FAST, replications=1)
        once = wb.simulate_once(OPTIONS[0], TREE.by_id(5), config, seed=5)
        rep = wb.simulate_replicated(OPTIONS[0], TREE.by_id(5), config, 5)
        assert rep.queue_pct == once.queue_pct
        assert rep.passive_pct == once.passive_pct
        assert rep.dissat_pct == once.dissat_pct
        assert rep.customers == once.customers

    def test_replication_means_and_sd(self):
        stats = wb.simulate_replicated(OPTIONS[0], TREE.by_id(9), FAST, 5)
        assert stats.replications == FAST.replications
        assert stats.queue_sd >= 0.0
        assert stats.customers > 0

    def test_deterministic_under_master_seed(self):
        a = wb.simulate_replicated(OPTIONS[0], TREE.by_id(9), FAST, 5)
        b = wb.simulate_replicated(OPTIONS[0], TREE.by_id(9), FAST, 5)
        assert a == b


class TestExpectedStats:
    def test_weighted_from_published_cells(self):
        # published per-scenario statistics for options 1 and 3
        from dovermcda.pipeline import baseline_simulation_table

        table = baseline_simulation_table(TREE, [1, 2, 3])
        e1 = table.expected[1]
        assert e1.queue_pct == pytest.approx(9.16, abs=0.01)
        assert e1.passive_pct == pytest.approx(2.64, abs=0.01)
        assert e1.dissat_pct == pytest.approx(5.28, abs=0.01)
        e3 = table.expected[3]
        assert e3.queue_pct == pytest.approx(6.39, abs=0.01)
        assert e3.passive_pct == pytest.approx(1.72, abs=0.01)
        assert e3.dissat_pct == pytest.approx(3.65, abs=0.01)

    def test_all_zero_cells_give_zero(self):
        zero = wb.SimStats(0.0, 0.0, 0.0)
        values = {s.id: zero for s in TREE}
        stats = wb.expected_stats_from_table(values, TREE)
        assert (stats.queue_pct, stats.passive_pct, stats.dissat_pct) == (0.0, 0.0, 0.0)

    def test_simulated_expectation_matches_manual_weighting(self):
        config = dataclasses.replace(FAST, replications=2)
        table = wb.simulation_table([OPTIONS[1]], TREE, config, 17)
        manual = sum(
            s.probability * table.cells[(2, s.id)].queue_pct for s in TREE
        )
        assert table.expected[2].queue_pct == pytest.approx(manual, abs=1e-9)
