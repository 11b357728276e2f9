"""Built-in differential scenarios: each runs the same situation under L1 and
L2 semantics and reports named divergence metrics (all zero exactly when the
two outcomes are identical).

Scenarios are parameterized models coded against the simulator modules; there
is no contract VM.  Randomness (the S1 price path) comes from a seeded
generator, so a fixed (id, params, seed) triple produces a byte-identical
serialized report.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import retryable
from .aliasing import Address, SenderContext, SenderKind, l2_msg_sender
from .chainmodel import L1Chain, L2View, WallClock, l1_block_number_at, l2_view_l1_number_at
from .gasmodel import GasParams, gas_fees
from .sequencer import L2Tx, Sequencer, SequencerStatus, TxOrigin


class ScenarioError(ValueError):
    """Unknown scenario id or bad parameter."""


@dataclass(frozen=True)
class ScenarioSpec:
    id: str
    title: str
    risk: str
    params: Mapping[str, Any]
    linked_rules: tuple[str, ...]


@dataclass
class DifferentialReport:
    scenario_id: str
    seed: int
    params: dict[str, Any]
    l1_outcome: dict[str, Any]
    l2_outcome: dict[str, Any]
    divergence: dict[str, float]
    narrative: str
    linked_rules: list[str] = field(default_factory=list)

    @property
    def divergent(self) -> bool:
        return any(v != 0 for v in self.divergence.values())


# --- S1: stale oracle during sequencer downtime ----------------------------


_S1_DEFAULTS: dict[str, Any] = {
    "downtime_s": 3600,
    "down_start_s": 600,
    "horizon_s": 7200,
    "update_interval_s": 60,
    "positions": 8,
    "start_price_cents": 10_000,
    "volatility_bp": 200,
}


def _run_stale_oracle(params: dict[str, Any], seed: int) -> DifferentialReport:
    rng = random.Random(seed)
    interval = params["update_interval_s"]
    horizon = params["horizon_s"]
    down_start = params["down_start_s"]
    down_end = down_start + params["downtime_s"]
    if interval <= 0 or horizon <= 0:
        raise ScenarioError("update_interval_s and horizon_s must be positive")

    start_price = params["start_price_cents"]
    if start_price < 10:
        raise ScenarioError("start_price_cents must be at least 10")
    times = list(range(0, horizon + 1, interval))
    prices: list[int] = []
    price = start_price
    for _ in times:
        prices.append(price)
        move = rng.uniform(-params["volatility_bp"], params["volatility_bp"]) / 10_000
        price = max(1, round(price * (1 + move)))

    # every position starts healthy: liquidation prices sit up to 10% below
    # the opening price and trigger when the market falls onto them
    liq_prices = sorted(
        rng.randint(start_price - start_price // 10, start_price - 1)
        for _ in range(params["positions"])
    )

    seq = Sequencer()
    observed_price = prices[0]
    observed_at = 0
    max_staleness = 0
    l1_liquidated: set[int] = set()
    l2_liquidated: set[int] = set()
    wrongful = 0
    monetary_delta = 0

    for step, t in enumerate(times):
        in_downtime = down_start <= t < down_end
        seq.set_status(SequencerStatus.DOWN if in_downtime else SequencerStatus.ACTIVE)
        seq.submit(
            L2Tx(
                id=f"price-update-{step}",
                submit_time=t,
                origin=TxOrigin.DIRECT_TO_SEQUENCER,
                payload=(t, prices[step]),
            )
        )
        for tx in seq.tick(t):
            produced_at, px = tx.payload
            if produced_at >= observed_at:
                observed_at, observed_price = produced_at, px

        max_staleness = max(max_staleness, t - observed_at)
        true_price = prices[step]
        for i, liq in enumerate(liq_prices):
            l1_hit = i not in l1_liquidated and true_price <= liq
            l2_hit = i not in l2_liquidated and observed_price <= liq
            if l1_hit:
                l1_liquidated.add(i)
            if l2_hit:
                l2_liquidated.add(i)
            if l1_hit != l2_hit and true_price != observed_price:
                wrongful += 1
                monetary_delta += abs(true_price - observed_price)

    divergence = {
        "max_price_staleness_s": max_staleness,
        "wrongful_liquidation_events": wrongful,
        "monetary_delta_cents": monetary_delta,
    }
    return DifferentialReport(
        scenario_id="S1",
        seed=seed,
        params=params,
        l1_outcome={
            "liquidated_positions": len(l1_liquidated),
            "price_staleness_s": 0,
        },
        l2_outcome={
            "liquidated_positions": len(l2_liquidated),
            "price_staleness_s": max_staleness,
        },
        divergence=divergence,
        narrative=(
            "A lending book watches an off-chain price feed. On L1 every "
            "update lands immediately; on L2 the updates flow through the "
            "sequencer, so during the outage the book keeps trading against "
            "the last pre-outage price and liquidation decisions drift from "
            "the true market."
        ),
        linked_rules=["ARB-SEQ-001"],
    )


# --- S2: strict block-number equality ---------------------------------------


_S2_DEFAULTS: dict[str, Any] = {
    "block_interval_s": 15,
    "sync_period_s": 60,
    "horizon_s": 3600,
    "genesis_number": 1000,
}


def _run_block_number_equality(params: dict[str, Any], seed: int) -> DifferentialReport:
    chain = L1Chain(
        genesis_number=params["genesis_number"],
        block_interval=params["block_interval_s"],
    )
    view = L2View(sync_period=params["sync_period_s"])
    horizon = params["horizon_s"]

    produced: set[int] = set()
    observable: set[int] = set()
    for t in range(horizon):
        clock = WallClock(t)
        produced.add(l1_block_number_at(clock, chain))
        observable.add(l2_view_l1_number_at(clock, chain, view))

    fraction = len(observable & produced) / len(produced)
    divergence = {"unobservable_fraction": 1.0 - fraction}
    return DifferentialReport(
        scenario_id="S2",
        seed=seed,
        params=params,
        l1_outcome={
            "distinct_numbers": len(produced),
            "observable_fraction": 1.0,
        },
        l2_outcome={
            "distinct_numbers": len(observable),
            "observable_fraction": fraction,
        },
        divergence=divergence,
        narrative=(
            "A condition like `block.number == N` sees every block number on "
            "L1, but the L2 view refreshes only at sync instants, so most "
            "numbers are simply never observable there and the equality can "
            "never fire for them."
        ),
        linked_rules=["ARB-TIME-001", "ARB-TIME-002"],
    )


# --- S3: alias-unaware permission check --------------------------------------


_S3_DEFAULTS: dict[str, Any] = {
    "l1_sender": "0x00000000000000000000000000000000deadbeef",
    "sender_kind": "contract",
    "offset": "0x1111000000000000000000000000000000001111",
}


def _run_alias_permission(params: dict[str, Any], seed: int) -> DifferentialReport:
    owner = Address.from_hex(params["l1_sender"])
    offset = Address.from_hex(params["offset"])
    kind = SenderKind(params["sender_kind"])
    ctx = SenderContext(l1_sender=owner, l1_sender_kind=kind)

    l2_sender = l2_msg_sender(ctx, offset)
    raw_check_l2 = "allow" if l2_sender == owner else "deny"
    alias_aware_l2 = "allow" if l2_sender == l2_msg_sender(ctx, offset) else "deny"
    raw_check_l1 = "allow"  # on L1 the caller is its own address

    divergence = {"raw_check_mismatch": 1 if raw_check_l1 != raw_check_l2 else 0}
    return DifferentialReport(
        scenario_id="S3",
        seed=seed,
        params=params,
        l1_outcome={"raw_check": raw_check_l1, "observed_sender": owner.hex()},
        l2_outcome={
            "raw_check": raw_check_l2,
            "alias_aware_check": alias_aware_l2,
            "observed_sender": l2_sender.hex(),
        },
        divergence=divergence,
        narrative=(
            "An owner-gated function authorizes the L1 contract directly on "
            "L1, but the same message arriving on L2 carries the aliased "
            "sender: the raw `msg.sender == owner` check denies the rightful "
            "owner, while an alias-aware check accepts it."
        ),
        linked_rules=["ARB-ALIAS-001"],
    )


# --- S4: unbounded refund loop ------------------------------------------------


_S4_DEFAULTS: dict[str, Any] = {
    "block_gas_limit": 30_000_000,
    "base_gas": 50_000,
    "per_iteration_gas": 40_000,
    "push_gas": 50_000,
    "push_calldata_bytes": 68,
    "l1_gas_price_wei": 20_000_000_000,
    "l2_gas_price_wei": 100_000_000,
    "calldata_price_l1_wei": 320_000_000_000,
}


def _run_dos_refund_loop(params: dict[str, Any], seed: int) -> DifferentialReport:
    limit = params["block_gas_limit"]
    base = params["base_gas"]
    per = params["per_iteration_gas"]
    if per <= 0:
        raise ScenarioError("per_iteration_gas must be positive")
    if base > limit:
        raise ScenarioError("base_gas already exceeds block_gas_limit")

    n = 1
    while base + n * per <= limit:
        n += 1
    first_failing_n = n
    max_safe_n = n - 1

    l1_push_cost = params["push_gas"] * params["l1_gas_price_wei"]
    l2_push_cost = gas_fees(
        GasParams(
            gas_used_l2=params["push_gas"],
            calldata_price_l1=params["calldata_price_l1_wei"],
            calldata_size_l1=params["push_calldata_bytes"],
            gas_price_l2=params["l2_gas_price_wei"],
        )
    )
    l1_attack_cost = first_failing_n * l1_push_cost
    l2_attack_cost = first_failing_n * l2_push_cost

    divergence = {"attack_cost_delta_wei": l1_attack_cost - l2_attack_cost}
    return DifferentialReport(
        scenario_id="S4",
        seed=seed,
        params=params,
        l1_outcome={
            "first_failing_n": first_failing_n,
            "max_safe_n": max_safe_n,
            "attack_cost_wei": l1_attack_cost,
        },
        l2_outcome={
            "first_failing_n": first_failing_n,
            "max_safe_n": max_safe_n,
            "attack_cost_wei": l2_attack_cost,
        },
        divergence=divergence,
        narrative=(
            "A refund loop over a growable participant list dies once "
            "base + N * per-iteration gas passes the block gas limit. The "
            "loop math is identical on both chains; what differs is the "
            "price of pushing entries, which is cheap enough on L2 to make "
            "inflating the array to the failure point an affordable attack."
        ),
        linked_rules=["ARB-DOS-001", "ARB-DOS-002"],
    )


# --- S5: retryable ticket fee paths -------------------------------------------


_S5_DEFAULTS: dict[str, Any] = {
    "submission_fee": 1_000,
    "l2_gas_provided": 5_000,
    "auto_gas_required": 3_000,
    "auto_fail_gas_required": 6_000,
    "callvalue": 100_000,
    "manual_submission_fee": 1_000,
    "manual_l2_gas": 3_000,
    "l1_direct_fee": 3_000,
    "escrow_callvalue": False,
}


def _ledger_summary(ledger: retryable.FeeLedger) -> dict[str, int]:
    return {
        "paid_in": ledger.paid_in,
        "refunded": ledger.refunded,
        "consumed_as_fees": ledger.consumed_as_fees,
        "delivered_callvalue": ledger.delivered_callvalue,
        "lost": ledger.lost,
    }


def _run_retryable_fee_paths(params: dict[str, Any], seed: int) -> DifferentialReport:
    funds = params["submission_fee"] + params["l2_gas_provided"] + params["callvalue"]

    def fresh_ticket(ledger: retryable.FeeLedger, ticket_id: str) -> retryable.Ticket:
        return retryable.create_ticket(
            ledger,
            ticket_id=ticket_id,
            created_at=0,
            funds_provided=funds,
            required=funds,
            submission_fee=params["submission_fee"],
            l2_gas_provided=params["l2_gas_provided"],
            callvalue=params["callvalue"],
            refund_address=0xA11CE,
            escrow_callvalue=params["escrow_callvalue"],
        )

    ledger_a = retryable.FeeLedger()
    ticket_a = fresh_ticket(ledger_a, "path-auto-success")
    retryable.auto_redeem(ticket_a, ledger_a, params["auto_gas_required"], now=60)

    ledger_b = retryable.FeeLedger()
    ticket_b = fresh_ticket(ledger_b, "path-manual")
    retryable.auto_redeem(ticket_b, ledger_b, params["auto_fail_gas_required"], now=60)
    retryable.manual_redeem(
        ticket_b,
        ledger_b,
        params["manual_submission_fee"],
        params["manual_l2_gas"],
        now=3 * 86_400,
    )

    ledger_c = retryable.FeeLedger()
    ticket_c = fresh_ticket(ledger_c, "path-expiry")
    retryable.auto_redeem(ticket_c, ledger_c, params["auto_fail_gas_required"], now=60)
    retryable.expire_tickets([ticket_c], ledger_c, now=retryable.BUFFER_LIFETIME)

    for ledger in (ledger_a, ledger_b, ledger_c):
        ledger.assert_balanced()

    divergence = {
        "extra_fees_auto_vs_l1": ledger_a.consumed_as_fees - params["l1_direct_fee"],
        "extra_fees_manual_vs_auto": ledger_b.consumed_as_fees - ledger_a.consumed_as_fees,
        "value_lost_on_expiry": ledger_c.lost,
    }
    return DifferentialReport(
        scenario_id="S5",
        seed=seed,
        params=params,
        l1_outcome={
            "fees": params["l1_direct_fee"],
            "delivered": params["callvalue"],
            "lost": 0,
        },
        l2_outcome={
            "auto_success": _ledger_summary(ledger_a),
            "auto_fail_manual": _ledger_summary(ledger_b),
            "auto_fail_expiry": _ledger_summary(ledger_c),
        },
        divergence=divergence,
        narrative=(
            "The same value transfer costs one fee on L1. Via a retryable "
            "ticket it can take three shapes: auto-redeem success refunds "
            "the submission fee, a failed auto-redeem charges it and a "
            "manual redeem pays it again plus fresh gas, and letting the "
            "buffered ticket expire after a week forfeits the carried value "
            "unless it was escrowed."
        ),
        linked_rules=[],
    )


# --- registry / dispatch -------------------------------------------------------


_SCENARIOS: tuple[tuple[ScenarioSpec, Any], ...] = (
    (
        ScenarioSpec(
            id="S1",
            title="stale-oracle",
            risk="outdated off-chain data while the sequencer is down",
            params=_S1_DEFAULTS,
            linked_rules=("ARB-SEQ-001",),
        ),
        _run_stale_oracle,
    ),
    (
        ScenarioSpec(
            id="S2",
            title="block-number-equality",
            risk="block-number equality checks that can never fire on L2",
            params=_S2_DEFAULTS,
            linked_rules=("ARB-TIME-001", "ARB-TIME-002"),
        ),
        _run_block_number_equality,
    ),
    (
        ScenarioSpec(
            id="S3",
            title="alias-permission",
            risk="permission checks that ignore L1-to-L2 address aliasing",
            params=_S3_DEFAULTS,
            linked_rules=("ARB-ALIAS-001",),
        ),
        _run_alias_permission,
    ),
    (
        ScenarioSpec(
            id="S4",
            title="dos-refund-loop",
            risk="unbounded loops that cheap L2 fees make attackable",
            params=_S4_DEFAULTS,
            linked_rules=("ARB-DOS-001", "ARB-DOS-002"),
        ),
        _run_dos_refund_loop,
    ),
    (
        ScenarioSpec(
            id="S5",
            title="retryable-fee-paths",
            risk="repeated submission fees and expiry losses on L1-to-L2 tickets",
            params=_S5_DEFAULTS,
            linked_rules=(),
        ),
        _run_retryable_fee_paths,
    ),
)

_SCENARIOS_BY_ID = {spec.id: (spec, runner) for spec, runner in _SCENARIOS}


def list_scenarios() -> list[ScenarioSpec]:
    return [spec for spec, _ in _SCENARIOS]


def _coerce(value: Any, default: Any, key: str) -> Any:
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in {"true", "false"}:
            return value.lower() == "true"
        raise ScenarioError(f"parameter {key!r} expects true/false, got {value!r}")
    if isinstance(default, int):
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ScenarioError(f"parameter {key!r} expects an integer, got {value!r}") from None
    if isinstance(default, float):
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ScenarioError(f"parameter {key!r} expects a number, got {value!r}") from None
    return str(value)


def run_scenario(
    scenario_id: str,
    params: Mapping[str, Any] | None = None,
    seed: int = 0,
) -> DifferentialReport:
    """Run one built-in scenario with overridden parameters."""
    if scenario_id not in _SCENARIOS_BY_ID:
        valid = ", ".join(spec.id for spec, _ in _SCENARIOS)
        raise ScenarioError(f"unknown scenario {scenario_id!r}; valid ids: {valid}")
    spec, runner = _SCENARIOS_BY_ID[scenario_id]
    merged = dict(spec.params)
    for key, value in (params or {}).items():
        if key not in merged:
            valid = ", ".join(sorted(merged))
            raise ScenarioError(
                f"unknown parameter {key!r} for scenario {scenario_id}; valid: {valid}"
            )
        merged[key] = _coerce(value, merged[key], key)
    return runner(merged, seed)


def serialize_report(report: DifferentialReport) -> str:
    """Canonical JSON: sorted keys, LF line endings, trailing newline."""
    doc = {
        "scenario_id": report.scenario_id,
        "seed": report.seed,
        "params": report.params,
        "l1_outcome": report.l1_outcome,
        "l2_outcome": report.l2_outcome,
        "divergence": report.divergence,
        "divergent": report.divergent,
        "narrative": report.narrative,
        "linked_rules": report.linked_rules,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --- event-record replay ---------------------------------------------------
#
# Custom simulations are driven by ordered event records rather than a
# scripting language.  Each record is {"at": seconds, "action": ..., **args}:
#
#   sequencer_down / sequencer_up
#   submit_tx      {id, origin?: direct_to_sequencer|delayed_inbox,
#                   gas_price?, gas_limit?, underpriced?}
#   tick
#   create_ticket  {id, funds_provided, required, submission_fee,
#                   l2_gas_provided, callvalue, refund_address?,
#                   l1_gas_spent?, escrow_callvalue?}
#   auto_redeem    {id, l2_gas_required}
#   manual_redeem  {id, new_submission_fee, l2_gas}
#   expire_tickets


class EventScriptError(ValueError):
    """Malformed event record."""


def replay_events(events: list[Mapping[str, Any]]) -> dict[str, Any]:
    """Run an ordered event script against fresh simulator state.

    Returns a summary: executed transactions (with execution time and the
    gas parameters they carried), final queue contents, ticket states, and
    the fee ledger.
    """
    seq = Sequencer()
    ledger = retryable.FeeLedger()
    tickets: dict[str, retryable.Ticket] = {}
    reverted: list[str] = []
    last_at = 0

    for index, event in enumerate(events):
        if "at" not in event or "action" not in event:
            raise EventScriptError(f"event {index} must have 'at' and 'action'")
        at = int(event["at"])
        action = event["action"]
        if at < last_at:
            raise EventScriptError(f"event {index} at {at} precedes {last_at}")
        last_at = at

        if action == "sequencer_down":
            seq.set_status(SequencerStatus.DOWN)
        elif action == "sequencer_up":
            seq.set_status(SequencerStatus.ACTIVE)
        elif action == "submit_tx":
            seq.submit(
                L2Tx(
                    id=str(event["id"]),
                    submit_time=at,
                    origin=TxOrigin(event.get("origin", "direct_to_sequencer")),
                    gas_price=int(event.get("gas_price", 0)),
                    gas_limit=int(event.get("gas_limit", 0)),
                    underpriced=bool(event.get("underpriced", False)),
                )
            )
        elif action == "tick":
            seq.tick(at)
        elif action == "create_ticket":
            ticket_id = str(event["id"])
            if ticket_id in tickets or ticket_id in reverted:
                raise EventScriptError(f"duplicate ticket id {ticket_id!r}")
            try:
                tickets[ticket_id] = retryable.create_ticket(
                    ledger,
                    ticket_id=ticket_id,
                    created_at=at,
                    funds_provided=int(event["funds_provided"]),
                    required=int(event["required"]),
                    submission_fee=int(event["submission_fee"]),
                    l2_gas_provided=int(event["l2_gas_provided"]),
                    callvalue=int(event["callvalue"]),
                    refund_address=int(event.get("refund_address", 0)),
                    l1_gas_spent=int(event.get("l1_gas_spent", 0)),
                    escrow_callvalue=bool(event.get("escrow_callvalue", True)),
                )
            except retryable.TicketRevert:
                reverted.append(ticket_id)
        elif action == "auto_redeem":
            retryable.auto_redeem(
                tickets[str(event["id"])], ledger, int(event["l2_gas_required"]), now=at
            )
        elif action == "manual_redeem":
            retryable.manual_redeem(
                tickets[str(event["id"])],
                ledger,
                int(event["new_submission_fee"]),
                int(event["l2_gas"]),
                now=at,
            )
        elif action == "expire_tickets":
            retryable.expire_tickets(tickets.values(), ledger, now=at)
        else:
            raise EventScriptError(f"unknown action {action!r} in event {index}")

    return {
        "executed": [
            {
                "id": tx.id,
                "submit_time": tx.submit_time,
                "executed_at": at,
                "origin": tx.origin.value,
                "gas_price": tx.gas_price,
                "underpriced": tx.underpriced,
            }
            for tx, at in seq.executed_log
        ],
        "pending": [tx.id for tx in seq.pending],
        "delayed_inbox": [tx.id for tx in seq.delayed_inbox],
        "max_staleness_s": seq.staleness(),
        "tickets": {tid: t.state.value for tid, t in sorted(tickets.items())},
        "reverted_tickets": sorted(reverted),
        "ledger": _ledger_summary(ledger),
    }
