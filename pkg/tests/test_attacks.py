import math

import numpy as np
import pytest

from qbmbs import attacks
from qbmbs.attacks import (
    ALICE_FORGERY_TABLE,
    AttackParams,
    TrialResult,
    analytic_detection,
    claimed_pair_error,
    forging_operator,
    overlap_detection_probability,
    teleport_readout_probabilities,
)
from qbmbs.common import ProtocolError
from qbmbs.crypto import Bits
from qbmbs.qsim import BELL_OUTCOMES, DEFAULT_BASIS, PLUS_MINUS, BellOutcome, EncodingBasis, PauliOp

SMALL = AttackParams(n=3, t=2, l=4)


def test_trial_result_invariant():
    with pytest.raises(ProtocolError):
        TrialResult(succeeded=True, detected=True, accepted=False)


def test_forgery_table_consistent():
    assert len(ALICE_FORGERY_TABLE) == 12
    pairs = {(a, b) for a, b, *_ in ALICE_FORGERY_TABLE}
    assert len(pairs) == 12 and all(a != b for a, b in pairs)
    for actual, target, v1, v2, v in ALICE_FORGERY_TABLE:
        assert PauliOp[v1] is attacks.teleport_correction(BellOutcome(*actual))
        assert PauliOp[v2] is attacks.teleport_correction(BellOutcome(*target))
        product = forging_operator(BellOutcome(*actual), BellOutcome(*target))
        assert abs(np.trace(PauliOp[v].matrix.conj().T @ product)) == pytest.approx(2)


@pytest.mark.parametrize("basis", [DEFAULT_BASIS, EncodingBasis.from_b(0.3), PLUS_MINUS])
@pytest.mark.parametrize("error", list(PauliOp))
def test_overlap_oracle_matches_closed_form(basis, error):
    assert overlap_detection_probability(error, basis) == pytest.approx(analytic_detection(error, basis))


def test_default_basis_values():
    assert analytic_detection(PauliOp.X, DEFAULT_BASIS) == pytest.approx(0.5)
    assert analytic_detection(PauliOp.Z, DEFAULT_BASIS) == pytest.approx(0.5)
    assert analytic_detection(PauliOp.Y, DEFAULT_BASIS) == 1.0


@pytest.mark.parametrize("actual", BELL_OUTCOMES)
@pytest.mark.parametrize("claimed", BELL_OUTCOMES)
@pytest.mark.parametrize("bit", [0, 1])
def test_teleport_readout_agrees_with_overlap(actual, claimed, bit):
    probs = teleport_readout_probabilities(bit, actual, claimed, DEFAULT_BASIS)
    error = claimed_pair_error(actual, claimed)
    v = DEFAULT_BASIS.vectors[bit]
    flip = 1 - abs(np.vdot(v, error.matrix @ v)) ** 2
    assert probs[1 - bit] == pytest.approx(flip)


def test_expected_values():
    p = AttackParams(n=1, t=1, l=16)
    assert attacks.expected_decoy_detection(p) == pytest.approx(1 - 0.75 ** 16)
    assert attacks.expected_modify_detection(p) == pytest.approx(1 - ((5 / 9) ** 3 + (4 / 9) ** 3))
    assert attacks.expected_modify_detection(p) == pytest.approx(540 / 729)


def test_induced_message_mask():
    assert attacks.induced_message_mask("110011") == Bits("101")


@pytest.mark.parametrize("name", list(attacks.CATALOG))
def test_original_attacks_succeed(name):
    (outcome,) = attacks.run_attack(name, "original", 20, 3, SMALL)
    assert outcome.success_rate == 1.0 and outcome.detection_rate == 0.0


@pytest.mark.parametrize("name", ["blindness-break", "charlie-substitute", "alice-extract-key"])
def test_improved_attacks_fail(name):
    for outcome in attacks.run_attack(name, "improved", 20, 3, AttackParams(n=4, t=1, l=4)):
        assert outcome.success_rate == 0.0


def test_improved_eve_reports_three_variants():
    out = attacks.run_attack("eve-forge", "improved", 10, 0, AttackParams(n=2, t=1, l=2))
    assert [o.variant for o in out] == ["X", "Z", "Y"]
    assert out[2].detection_rate == 1.0


def test_modify_message_improved_rate():
    (o,) = attacks.run_attack("modify-message", "improved", 400, 1, AttackParams(n=1, t=1, l=2))
    assert o.expected_detection == pytest.approx(540 / 729)
    assert o.detection_ci[0] <= o.expected_detection <= o.detection_ci[1]


def test_honest_outcome_and_schema():
    (o,) = attacks.run_attack("honest", "improved", 5, 0, SMALL)
    d = o.as_dict()
    assert d["acceptance_rate"] == 1.0
    assert set(d) >= {"attack", "scheme", "trials", "success_rate", "detection_rate", "success_ci", "detection_ci", "transcript_digest"}


def test_unknown_attack():
    with pytest.raises(ProtocolError):
        attacks.run_attack("nope", "original", 1)
    with pytest.raises(ProtocolError):
        attacks.run_trials("honest", "classical", SMALL, 1)


def test_wilson_interval():
    low, high = attacks.wilson_interval(0, 100)
    assert low == 0.0 and 0 < high < 0.05


def test_trials_reproducible_and_independent():
    a = attacks.run_trials("honest", "original", SMALL, 3, 7)
    b = attacks.run_trials("honest", "original", SMALL, 3, 7)
    assert [r.digest for r in a] == [r.digest for r in b]
    assert len({r.digest for r in a}) == 3


def test_worker_pool_matches_serial():
    serial = attacks.run_attack("blindness-break", "original", 4, 2, SMALL)
    pooled = attacks.run_attack("blindness-break", "original", 4, 2, SMALL, workers=2)
    assert serial[0].as_dict() == pooled[0].as_dict()
