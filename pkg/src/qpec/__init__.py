"""Simulator and protocol engine for GHZ3-triplet private equality comparison."""

from qpec.attacks import AttackModel
from qpec.bits import BitVector, cip_census, inner_product_mod2, xor
from qpec.protocol import (
    ComparisonReport,
    ConfigError,
    ProtocolConfig,
    Verdict,
    run_protocol,
    run_two_party,
)
from qpec.report import compute_efficiency, report_to_json

__all__ = [
    "AttackModel",
    "BitVector",
    "ComparisonReport",
    "ConfigError",
    "ProtocolConfig",
    "Verdict",
    "cip_census",
    "compute_efficiency",
    "inner_product_mod2",
    "report_to_json",
    "run_protocol",
    "run_two_party",
    "xor",
]
