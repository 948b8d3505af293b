import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbmbs import improved
from qbmbs.common import CHARLIE, ProtocolError, Verdict, signatory
from qbmbs.crypto import Bits
from qbmbs.netsim import PublicBoard
from qbmbs.qsim import BELL_OUTCOMES, DEFAULT_BASIS, PLUS_MINUS, EncodingBasis, Qubit, epr_pair, prepare_message_qubit_improved

from conftest import seeds


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 3), st.integers(1, 8))
def test_honest_runs_accept(seed, n, t, l):
    result = improved.run(n, t, seed, l=l)
    assert result.accepted
    assert all(m == result.m for m in result.m_stars)
    assert result.setup_attempts == [1] * t


def test_other_unbalanced_basis(rng):
    assert improved.run(4, 2, rng, basis=EncodingBasis.from_b(0.3)).accepted


def test_balanced_basis_rejected(rng):
    with pytest.raises(ProtocolError):
        improved.run(2, 1, rng, basis=PLUS_MINUS)


def test_world_validation(rng):
    with pytest.raises(ProtocolError):
        improved.run(2, 1, rng, l=0)
    with pytest.raises(ProtocolError):
        improved.run(2, 1, rng, m="101")
    with pytest.raises(ProtocolError):
        improved.run(2, 2, rng, keys=improved.new_keys(2, 1, rng))


def test_signatory_only_sees_blinded_message():
    seen = {}

    from qbmbs.adversary import Adversary
    from qbmbs.qsim import measure_qubit

    class Peek(Adversary):
        def signatory_decrypted(self, world, i, qubits):
            seen[i] = Bits(measure_qubit(q, world.basis, world.rng, keep=True) for q in qubits)

    result = improved.run(6, 2, 5, adversary=Peek())
    assert result.accepted
    assert seen[0] == seen[1] == result.m ^ result.r


@pytest.mark.parametrize("outcome", BELL_OUTCOMES)
@pytest.mark.parametrize("bit", [0, 1])
def test_sign_and_verify_each_branch(outcome, bit, rng):
    k_cu = Bits.random(4, rng)
    r = Bits([1])
    msg = Qubit(prepare_message_qubit_improved(bit, DEFAULT_BASIS))
    u, c = epr_pair()
    beta, sig = improved.sign([msg], [u], k_cu, rng, force=[outcome])
    assert beta == Bits(outcome)
    assert len(sig.bits) == 6
    assert improved.digest_check(sig.bits, sig.R, 1)
    got_beta, m_star = improved.charlie_verify(sig.bits, k_cu, [c], r, DEFAULT_BASIS, rng)
    assert got_beta == beta and m_star == Bits([bit ^ 1])


def test_digest_check_catches_bit_change(rng):
    k_cu = Bits.random(32, rng)
    msgs = [Qubit(prepare_message_qubit_improved(0, DEFAULT_BASIS)) for _ in range(8)]
    halves = [epr_pair()[0] for _ in range(8)]
    _, sig = improved.sign(msgs, halves, k_cu, rng)
    tampered = sig.bits ^ ([1] + [0] * 47)
    assert not improved.digest_check(tampered, sig.R, 8)


def test_board_checks():
    n, t = 2, 2
    board = PublicBoard()
    sigs, nonces = [], []
    for i in range(t):
        masked, R = Bits.from_int(i, 2 * n), Bits.from_int(3 * i + 1, 4 * n)
        sigs.append(masked + improved.signature_digest(masked, R))
        nonces.append(R)
        board.announce(CHARLIE, f"sig/{i}", sigs[i])
        board.announce(signatory(i), f"R/{i}", R)
        board.announce(CHARLIE, f"multisig/{i}", sigs[i])
        board.announce(signatory(i), f"R/{i}/final", R)
    m = Bits("01")
    assert improved.bob_verify(m, m, board, 0, n) is Verdict.ACCEPT
    assert improved.bob_verify(Bits("11"), m, board, 0, n) is Verdict.REJECT
    assert improved.combine(m, m, board, t, n) is Verdict.ACCEPT
    board.announce(CHARLIE, "multisig/1", sigs[1] ^ ([0] * (2 * n) + [1] + [0] * (4 * n - 1)))
    assert improved.combine(m, m, board, t, n) is Verdict.REJECT


def test_key_reuse_gives_fresh_pads(rng):
    keys = improved.new_keys(4, 2, rng)
    pads = []
    for _ in range(10):
        result = improved.run(4, 2, rng, keys=keys)
        assert result.accepted
        pads.extend(p for _, p in result.world.pads)
    assert len(set(pads)) == len(pads)


def test_messages_agree():
    assert improved.messages_agree([Bits("1"), Bits("1")])
    assert not improved.messages_agree([Bits("1"), None])
    assert not improved.messages_agree([])
