import pytest
from hypothesis import given, strategies as st

from dovermcda.costs import (
    CostBreakdown,
    FinancialParams,
    OptionSpec,
    cba_rank,
    default_options,
    effective_cost,
    environmental_cost,
    expected_breakdown,
    heaviside,
    interest_factor,
    safety_cost,
    safety_staffing,
    traffic_profit,
)
from dovermcda.scenarios import ValidationError, default_vtg_distribution

PARAMS = FinancialParams()
OPT1, OPT2, OPT3 = default_options()


class TestInterest:
    def test_paper_values(self):
        # direct arithmetic: 1 + 1031000 / 46092000
        assert interest_factor(PARAMS) == pytest.approx(1.0223683, abs=1e-6)

    def test_no_interest(self):
        assert interest_factor(FinancialParams(interest_earned=0.0)) == 1.0

    def test_simple_ratio(self):
        assert interest_factor(
            FinancialParams(interest_earned=100.0, cash_asset=1000.0)
        ) == pytest.approx(1.1)

    def test_zero_asset(self):
        with pytest.raises(ZeroDivisionError):
            interest_factor(FinancialParams(cash_asset=0.0))


class TestEffectiveCost:
    def test_lane(self):
        assert effective_cost(90_000.0, PARAMS) == pytest.approx(92_148.8, abs=0.1)

    def test_greenery(self):
        assert effective_cost(50_000.0, PARAMS) == pytest.approx(51_193.78, abs=0.05)

    def test_zero(self):
        assert effective_cost(0.0, PARAMS) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            effective_cost(-1.0, PARAMS)


class TestSafetyCost:
    def test_one_step(self):
        assert safety_cost(0.1, PARAMS) == pytest.approx(205_146.8, abs=1.0)

    def test_zero(self):
        assert safety_cost(0.0, PARAMS) == 0.0

    def test_two_steps(self):
        assert safety_cost(0.2, PARAMS) == pytest.approx(410_293.6, abs=2.0)

    def test_linearity_in_steps(self):
        one = safety_cost(PARAMS.vtg_step, PARAMS)
        for k in range(5):
            assert safety_cost(k * PARAMS.vtg_step, PARAMS) == pytest.approx(k * one)

    def test_fractional_growth_rounds_up_and_flags(self):
        detail = safety_staffing(0.15, PARAMS)
        assert detail.steps == 2
        assert detail.rounded_up
        assert detail.cost == pytest.approx(safety_cost(0.2, PARAMS))
        assert not safety_staffing(0.2, PARAMS).rounded_up


class TestHeaviside:
    @pytest.mark.parametrize("x,expected", [(0.1, 1), (0.0, 0), (-1.0, 0), (1e-12, 1)])
    def test_values(self, x, expected):
        assert heaviside(x) == expected


class TestEnvironmentalCost:
    def test_option1_growth(self):
        assert environmental_cost(OPT1, 0.1, PARAMS) == pytest.approx(51_193.78, abs=0.05)

    def test_option2_small_growth_is_free(self):
        assert environmental_cost(OPT2, 0.1, PARAMS) == 0.0

    def test_option2_large_growth_pays(self):
        assert environmental_cost(OPT2, 0.2, PARAMS) == pytest.approx(51_193.78, abs=0.05)

    def test_monotone_in_growth(self):
        for opt in default_options():
            costs = [environmental_cost(opt, v / 100, PARAMS) for v in range(0, 40, 2)]
            assert costs == sorted(costs)

    def test_lane_options_never_worse_than_do_nothing(self):
        for v in [0.0, 0.05, 0.1, 0.15, 0.2, 0.3]:
            c2 = environmental_cost(OPT2, v, PARAMS)
            assert c2 == environmental_cost(OPT3, v, PARAMS)
            assert c2 <= environmental_cost(OPT1, v, PARAMS)


class TestTrafficProfit:
    @pytest.mark.parametrize("vtg,expected", [(0.1, 758_800.0), (0.0, 0.0), (0.2, 1_517_600.0)])
    def test_values(self, vtg, expected):
        assert traffic_profit(vtg, PARAMS) == pytest.approx(expected)


class TestExpectedBreakdown:
    @pytest.fixture
    def breakdowns(self):
        vtg = default_vtg_distribution()
        return {o.id: expected_breakdown(o, vtg, PARAMS) for o in default_options()}

    def test_cost_totals(self, breakdowns):
        assert breakdowns[1].cost_total == pytest.approx(243_542.1, abs=1.0)
        assert breakdowns[2].cost_total == pytest.approx(310_094.1, abs=1.0)
        assert breakdowns[3].cost_total == pytest.approx(310_094.1, abs=1.0)

    def test_option1_net_benefit(self, breakdowns):
        # 758800 - 243542.1 from the published cost rows
        assert breakdowns[1].net_benefit == pytest.approx(515_257.9, abs=1.0)

    def test_facility_only_when_building(self, breakdowns):
        assert breakdowns[1].facility == 0.0
        assert breakdowns[2].facility == pytest.approx(92_148.8, abs=0.1)

    def test_accounting_identity(self, breakdowns):
        for b in breakdowns.values():
            assert b.cost_total == pytest.approx(
                b.environmental + b.facility + b.safety, abs=1e-6
            )
            assert b.net_benefit + b.cost_total == pytest.approx(b.traffic_profit, abs=1e-6)


class TestCbaRank:
    def test_paper_options(self):
        vtg = default_vtg_distribution()
        outcome = cba_rank([expected_breakdown(o, vtg, PARAMS) for o in default_options()])
        assert outcome.order[0] == 1
        assert outcome.method == "cba"

    def test_single_option(self):
        b = CostBreakdown(7, 0, 0, 0, 0, 10.0, 10.0)
        assert cba_rank([b]).order == (7,)

    def test_tie_breaks_by_id(self):
        b2 = CostBreakdown(2, 0, 0, 0, 0, 10.0, 10.0)
        b1 = CostBreakdown(1, 0, 0, 0, 0, 10.0, 10.0)
        assert cba_rank([b2, b1]).order == (1, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            cba_rank([])

    @given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=8, unique=True))
    def test_output_is_permutation(self, nets):
        breakdowns = [
            CostBreakdown(i + 1, 0, 0, 0, 0, n, n) for i, n in enumerate(nets)
        ]
        outcome = cba_rank(breakdowns)
        assert sorted(outcome.order) == [i + 1 for i in range(len(nets))]
        totals = [outcome.totals[oid] for oid in outcome.order]
        assert totals == sorted(totals, reverse=True)


class TestOptionSpec:
    def test_lane_exclusivity(self):
        with pytest.raises(ValidationError):
            OptionSpec(4, "both", extra_lorry_lane=True, extra_non_lorry_lane=True)

    def test_consumption_units(self):
        assert OPT1.consumption_unit == 1.0
        assert OPT2.consumption_unit == 0.85
        assert OPT3.consumption_unit == 0.85
