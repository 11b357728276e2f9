"""Deterministic model of L1 block production and the sequencer's lagged view of it.

The L1 chain mints one block every ``block_interval`` seconds.  The L2
sequencer refreshes its copy of the L1 block number only once per
``sync_period``, so contracts running on L2 observe a step function that can
trail the true L1 number by up to ``sync_period / block_interval - 1``
blocks.  L2 timestamps come from the sequencer's local clock, which has
coarse precision, so consecutive reads may return the same value.

All functions here are pure; there is no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

DEFAULT_BLOCK_INTERVAL = 15
DEFAULT_SYNC_PERIOD = 60
DEFAULT_SEQ_CLOCK_PRECISION = 1


@dataclass(frozen=True)
class WallClock:
    """Seconds since the simulation epoch.

    Integer seconds everywhere in normal use; fractional readings are
    accepted so the coarse sequencer clock can be exercised with sub-second
    inputs.
    """

    t: float = 0

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"wall clock cannot be negative, got {self.t}")

    def advance(self, dt: float) -> "WallClock":
        if dt <= 0:
            raise ValueError("wall clock must advance strictly")
        return WallClock(self.t + dt)


@dataclass(frozen=True)
class L1Chain:
    """L1 block production: consecutive numbers, one block per interval."""

    genesis_number: int
    block_interval: int = DEFAULT_BLOCK_INTERVAL

    def __post_init__(self) -> None:
        if self.genesis_number < 0:
            raise ValueError("genesis_number must be non-negative")
        if self.block_interval <= 0:
            raise ValueError("block_interval must be positive")

    def blocks_through(self, t: float) -> list[tuple[int, int]]:
        """Ordered (number, timestamp) pairs minted up to and including time t."""
        if t < 0:
            raise ValueError("time must be non-negative")
        minted = int(t) // self.block_interval
        return [
            (self.genesis_number + k, k * self.block_interval)
            for k in range(minted + 1)
        ]


@dataclass(frozen=True)
class L2View:
    """The sequencer's view of L1: periodic block-number syncs, coarse clock.

    ``last_synced_l1_number`` / ``last_sync_time`` are None until the view is
    pinned to a moment via :func:`sync_state_at`.
    """

    sync_period: int = DEFAULT_SYNC_PERIOD
    seq_clock_precision: int = DEFAULT_SEQ_CLOCK_PRECISION
    last_synced_l1_number: int | None = None
    last_sync_time: int | None = None

    def __post_init__(self) -> None:
        if self.sync_period <= 0:
            raise ValueError("sync_period must be positive")
        if self.seq_clock_precision <= 0:
            raise ValueError("seq_clock_precision must be positive")


@dataclass(frozen=True)
class L2Timestamp:
    """A sequencer clock reading. Nondecreasing; duplicates permitted."""

    value: int


def l1_block_number_at(clock: WallClock, chain: L1Chain) -> int:
    """True L1 block number at the given wall-clock time."""
    return chain.genesis_number + int(clock.t) // chain.block_interval


def _check_sync_period(chain: L1Chain, view: L2View) -> None:
    if view.sync_period % chain.block_interval != 0:
        raise ValueError(
            f"sync_period ({view.sync_period}) must be a positive multiple "
            f"of block_interval ({chain.block_interval})"
        )


def l2_view_l1_number_at(clock: WallClock, chain: L1Chain, view: L2View) -> int:
    """L1 block number as observed from L2 at the given wall-clock time.

    The view refreshes at every multiple of ``sync_period``; a refresh
    instant itself reports the fresh value, and the value then holds until
    the next refresh.
    """
    _check_sync_period(chain, view)
    sync_instant = (int(clock.t) // view.sync_period) * view.sync_period
    return l1_block_number_at(WallClock(sync_instant), chain)


def sync_state_at(clock: WallClock, chain: L1Chain, view: L2View) -> L2View:
    """Pin the view's last-sync fields to the most recent refresh instant."""
    _check_sync_period(chain, view)
    sync_instant = (int(clock.t) // view.sync_period) * view.sync_period
    return replace(
        view,
        last_synced_l1_number=l1_block_number_at(WallClock(sync_instant), chain),
        last_sync_time=sync_instant,
    )


def l2_timestamp_read(view: L2View, clock: WallClock) -> L2Timestamp:
    """Sequencer clock reading: wall time truncated to the clock's precision.

    Two reads within one precision unit return equal values; the result never
    decreases for nondecreasing inputs.
    """
    truncated = math.floor(clock.t / view.seq_clock_precision) * view.seq_clock_precision
    return L2Timestamp(value=int(truncated))


def block_number_table(
    chain: L1Chain,
    view: L2View,
    horizon: int,
    step: int,
) -> list[tuple[int, int, int]]:
    """(wall time, true L1 number, L2-observed number) rows through horizon."""
    if step <= 0:
        raise ValueError("step must be positive")
    rows = []
    for t in range(0, horizon + 1, step):
        clock = WallClock(t)
        rows.append(
            (
                t,
                l1_block_number_at(clock, chain),
                l2_view_l1_number_at(clock, chain, view),
            )
        )
    return rows
