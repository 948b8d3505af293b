"""Statevector simulation of two broadcasting multiple blind signature schemes
and an attack harness that measures how each one holds up."""
from .attacks import CATALOG, AttackOutcome, AttackParams, defense_suite, run_attack
from .common import Verdict
from .crypto import Bits, KeyRing
from .qsim import DEFAULT_BASIS, PLUS_MINUS, BellOutcome, EncodingBasis, PauliOp, StateVector

__all__ = [
    "AttackOutcome",
    "AttackParams",
    "BellOutcome",
    "Bits",
    "CATALOG",
    "DEFAULT_BASIS",
    "EncodingBasis",
    "KeyRing",
    "PLUS_MINUS",
    "PauliOp",
    "StateVector",
    "Verdict",
    "defense_suite",
    "run_attack",
]
