"""arbmigrate: migration-safety toolkit for Ethereum-to-Arbitrum moves.

Simulators for the semantic differences that bite migrated contracts
(sequencer downtime and the delayed inbox, retryable-ticket fees, L1 block
number lag, address aliasing, gas pricing) plus a static analyzer that flags
the corresponding risk patterns in contract source, and differential
scenarios demonstrating each risk end to end.
"""

__version__ = "0.1.0"

from . import aliasing, chainmodel, gasmodel, minisol, retryable, rules, scenarios, sequencer

__all__ = [
    "__version__",
    "aliasing",
    "chainmodel",
    "gasmodel",
    "minisol",
    "retryable",
    "rules",
    "scenarios",
    "sequencer",
]
