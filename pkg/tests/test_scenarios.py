import json

import pytest

from arbmigrate.chainmodel import L1Chain, L2View, WallClock, l1_block_number_at, l2_view_l1_number_at
from arbmigrate.scenarios import (
    DifferentialReport,
    ScenarioError,
    list_scenarios,
    run_scenario,
    serialize_report,
)


class TestCatalog:
    def test_exactly_the_five_builtins_in_stable_order(self):
        specs = list_scenarios()
        assert [s.id for s in specs] == ["S1", "S2", "S3", "S4", "S5"]
        assert list_scenarios() == specs

    def test_each_entry_documents_its_risk_and_params(self):
        for spec in list_scenarios():
            assert spec.risk
            assert spec.params

    def test_unknown_id_error_lists_valid_ids(self):
        with pytest.raises(ScenarioError, match="S1, S2, S3, S4, S5"):
            run_scenario("S9")

    def test_unknown_param_rejected_with_valid_list(self):
        with pytest.raises(ScenarioError, match="downtime_s"):
            run_scenario("S1", {"downtime": 5})

    def test_bad_param_value_rejected(self):
        with pytest.raises(ScenarioError):
            run_scenario("S1", {"downtime_s": "soon"})


class TestSerialization:
    def test_serialize_twice_is_byte_identical(self):
        a = serialize_report(run_scenario("S2"))
        b = serialize_report(run_scenario("S2"))
        assert a == b
        assert a.endswith("\n")
        assert "\r" not in a

    def test_round_trip_recovers_metrics(self):
        report = run_scenario("S4")
        doc = json.loads(serialize_report(report))
        assert doc["divergence"] == report.divergence
        assert doc["l2_outcome"] == report.l2_outcome
        assert doc["scenario_id"] == "S4"

    def test_divergent_flag_false_iff_metrics_zero(self):
        quiet = run_scenario("S1", {"downtime_s": 0})
        assert not quiet.divergent
        doc = json.loads(serialize_report(quiet))
        assert doc["divergent"] is False
        loud = run_scenario("S2")
        assert loud.divergent

    def test_fixed_inputs_fixed_bytes(self):
        first = serialize_report(run_scenario("S1", {"downtime_s": 1800}, seed=5))
        second = serialize_report(run_scenario("S1", {"downtime_s": 1800}, seed=5))
        assert first == second


class TestStaleOracle:
    def test_zero_downtime_null_result(self):
        report = run_scenario("S1", {"downtime_s": 0})
        assert report.divergence == {
            "max_price_staleness_s": 0,
            "wrongful_liquidation_events": 0,
            "monetary_delta_cents": 0,
        }

    def test_staleness_covers_the_outage(self):
        report = run_scenario("S1")
        assert report.divergence["max_price_staleness_s"] >= 3600

    def test_falling_market_during_outage_diverges(self):
        report = run_scenario("S1", seed=1)
        assert report.divergence["wrongful_liquidation_events"] > 0
        assert report.divergence["monetary_delta_cents"] > 0
        assert report.l1_outcome["liquidated_positions"] > report.l2_outcome["liquidated_positions"]

    def test_links_the_staleness_rule(self):
        assert run_scenario("S1").linked_rules == ["ARB-SEQ-001"]


class TestBlockNumberEquality:
    def test_default_observable_fraction(self):
        report = run_scenario("S2")
        assert report.l2_outcome["observable_fraction"] == 0.25
        assert report.l1_outcome["observable_fraction"] == 1.0
        assert report.divergence["unobservable_fraction"] == 0.75

    def test_matches_brute_force_enumeration(self):
        report = run_scenario("S2")
        chain = L1Chain(genesis_number=1000, block_interval=15)
        view = L2View(sync_period=60)
        produced = set()
        seen = set()
        for t in range(3600):
            produced.add(l1_block_number_at(WallClock(t), chain))
            seen.add(l2_view_l1_number_at(WallClock(t), chain, view))
        assert report.l2_outcome["observable_fraction"] == len(seen & produced) / len(produced)

    @pytest.mark.parametrize("interval,sync", [(5, 10), (10, 60), (15, 30), (20, 60), (30, 30)])
    def test_fraction_equals_interval_over_sync_for_divisor_pairs(self, interval, sync):
        report = run_scenario(
            "S2", {"block_interval_s": interval, "sync_period_s": sync, "horizon_s": 3600}
        )
        assert report.l2_outcome["observable_fraction"] == pytest.approx(interval / sync)

    def test_no_lag_no_divergence(self):
        report = run_scenario("S2", {"block_interval_s": 15, "sync_period_s": 15})
        assert not report.divergent


class TestAliasPermission:
    def test_outcome_pair_is_deny_then_allow(self):
        report = run_scenario("S3")
        assert report.l2_outcome["raw_check"] == "deny"
        assert report.l2_outcome["alias_aware_check"] == "allow"
        assert report.l1_outcome["raw_check"] == "allow"
        assert report.divergence["raw_check_mismatch"] == 1

    def test_externally_owned_sender_does_not_diverge(self):
        report = run_scenario("S3", {"sender_kind": "externally_owned"})
        assert report.l2_outcome["raw_check"] == "allow"
        assert not report.divergent

    def test_observed_sender_is_the_alias(self):
        report = run_scenario("S3")
        assert report.l2_outcome["observed_sender"] != report.l1_outcome["observed_sender"]


class TestDosRefundLoop:
    def test_default_first_failing_n(self):
        report = run_scenario("S4")
        assert report.l2_outcome["first_failing_n"] == 749
        assert report.l2_outcome["max_safe_n"] == 748

    @pytest.mark.parametrize(
        "limit,base,per",
        [(30_000_000, 50_000, 40_000), (30_000_000, 0, 7_000), (1_000_000, 999_999, 3), (15_000_000, 21_000, 55_000)],
    )
    def test_simulation_matches_closed_form(self, limit, base, per):
        report = run_scenario(
            "S4", {"block_gas_limit": limit, "base_gas": base, "per_iteration_gas": per}
        )
        assert report.l2_outcome["first_failing_n"] == (limit - base) // per + 1

    def test_attack_cheaper_on_l2(self):
        report = run_scenario("S4")
        assert report.l2_outcome["attack_cost_wei"] < report.l1_outcome["attack_cost_wei"]
        assert report.divergence["attack_cost_delta_wei"] > 0

    def test_base_gas_beyond_limit_rejected(self):
        with pytest.raises(ScenarioError):
            run_scenario("S4", {"base_gas": 40_000_000})


class TestRetryableFeePaths:
    def test_ledgers_balance_on_every_path(self):
        report = run_scenario("S5")
        for path in ("auto_success", "auto_fail_manual", "auto_fail_expiry"):
            ledger = report.l2_outcome[path]
            assert ledger["paid_in"] == (
                ledger["refunded"]
                + ledger["consumed_as_fees"]
                + ledger["delivered_callvalue"]
                + ledger["lost"]
            )

    def test_manual_path_pays_more_than_auto_success(self):
        report = run_scenario("S5")
        auto = report.l2_outcome["auto_success"]["consumed_as_fees"]
        manual = report.l2_outcome["auto_fail_manual"]["consumed_as_fees"]
        assert manual > auto
        assert report.divergence["extra_fees_manual_vs_auto"] == manual - auto

    def test_expiry_loses_the_carried_value(self):
        report = run_scenario("S5")
        assert report.divergence["value_lost_on_expiry"] == 100_000
        assert report.l2_outcome["auto_fail_expiry"]["delivered_callvalue"] == 0

    def test_escrowed_callvalue_survives(self):
        report = run_scenario("S5", {"escrow_callvalue": "true"})
        assert report.divergence["value_lost_on_expiry"] == 0
        assert report.l2_outcome["auto_fail_expiry"]["refunded"] >= 100_000

    def test_callvalue_delivered_on_both_redeem_paths(self):
        report = run_scenario("S5")
        assert report.l2_outcome["auto_success"]["delivered_callvalue"] == 100_000
        assert report.l2_outcome["auto_fail_manual"]["delivered_callvalue"] == 100_000


class TestEventReplay:
    def test_downtime_script_reproduces_recovery_ordering(self):
        from arbmigrate.scenarios import replay_events

        summary = replay_events([
            {"at": 0, "action": "sequencer_down"},
            {"at": 10, "action": "submit_tx", "id": "a"},
            {"at": 20, "action": "submit_tx", "id": "b"},
            {"at": 3600, "action": "sequencer_up"},
            {"at": 3601, "action": "submit_tx", "id": "c"},
            {"at": 3602, "action": "tick"},
        ])
        assert [e["id"] for e in summary["executed"]] == ["a", "b", "c"]
        assert summary["max_staleness_s"] == 3592
        assert summary["pending"] == [] and summary["delayed_inbox"] == []

    def test_ticket_lifecycle_script(self):
        from arbmigrate.scenarios import replay_events

        summary = replay_events([
            {"at": 0, "action": "create_ticket", "id": "t1", "funds_provided": 600,
             "required": 600, "submission_fee": 100, "l2_gas_provided": 200,
             "callvalue": 300},
            {"at": 0, "action": "create_ticket", "id": "t2", "funds_provided": 10,
             "required": 999, "submission_fee": 1, "l2_gas_provided": 1,
             "callvalue": 1, "l1_gas_spent": 50},
            {"at": 5, "action": "auto_redeem", "id": "t1", "l2_gas_required": 999},
            {"at": 200, "action": "manual_redeem", "id": "t1",
             "new_submission_fee": 100, "l2_gas": 150},
        ])
        assert summary["tickets"]["t1"] == "manually_redeemed"
        assert summary["reverted_tickets"] == ["t2"]
        ledger = summary["ledger"]
        assert ledger["paid_in"] == sum(
            ledger[k] for k in ("refunded", "consumed_as_fees", "delivered_callvalue", "lost")
        )
        assert ledger["lost"] == 50

    def test_underpriced_gas_params_surface_in_summary(self):
        from arbmigrate.scenarios import replay_events

        summary = replay_events([
            {"at": 0, "action": "sequencer_down"},
            {"at": 0, "action": "submit_tx", "id": "cheap",
             "origin": "delayed_inbox", "gas_price": 1, "underpriced": True},
            {"at": 90_000, "action": "tick"},
        ])
        # past the force-inclusion delay, but underpriced txs stay excluded
        assert summary["delayed_inbox"] == ["cheap"]
        assert summary["executed"] == []

    def test_script_errors(self):
        from arbmigrate.scenarios import EventScriptError, replay_events

        with pytest.raises(EventScriptError, match="unknown action"):
            replay_events([{"at": 0, "action": "explode"}])
        with pytest.raises(EventScriptError, match="precedes"):
            replay_events([
                {"at": 10, "action": "tick"},
                {"at": 5, "action": "tick"},
            ])
        with pytest.raises(EventScriptError, match="'at'"):
            replay_events([{"action": "tick"}])
