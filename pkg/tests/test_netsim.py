import pytest

from qbmbs.crypto import Bits
from qbmbs.netsim import BOARD, Network, PublicBoard, QuantumPayload, Transcript, payload_digest
from qbmbs.qsim import computational_qubit


def test_fifo_delivery_and_logging():
    net = Network()
    net.send("A", "B", Bits("01"), "first")
    net.send("A", "B", Bits("10"), "second")
    assert net.recv("B", "A") == Bits("01")
    assert net.recv("B", "A") == Bits("10")
    with pytest.raises(LookupError):
        net.recv("B", "A")
    assert net.send_count == 2
    assert [e.label for e in net.transcript] == ["first", "second"]


def test_tap_rewrites_payload():
    net = Network()
    seen = []

    def tap(payload, label):
        seen.append(label)
        return payload ^ Bits("11")

    net.tap("A", "B", tap)
    net.send("A", "B", Bits("01"), "m")
    assert net.recv("B", "A") == Bits("10")
    assert seen == ["m"]


def test_quantum_payload_moves_handles():
    net = Network()
    q = computational_qubit(1)
    net.send("A", "B", QuantumPayload([q]), "q")
    got = net.recv("B", "A")
    assert got.data[0] is q
    assert net.transcript.events[0].kind == "quantum"


def test_board_is_append_only_and_logged():
    net = Network()
    net.announce("C", "sig/0", "0101")
    net.announce("C", "sig/0", "1111")
    net.announce("U1", "sig/0", "0000")
    assert net.board.read("sig/0", "C") == Bits("1111")
    assert net.board.read("sig/0") == Bits("0000")
    with pytest.raises(KeyError):
        net.board.read("missing")
    assert len(net.board) == 3
    assert isinstance(net.board.entries, tuple)
    assert all(e.receiver == BOARD for e in net.transcript)


def test_transcript_digest_is_content_addressed():
    def build(bits):
        t = Transcript()
        board = PublicBoard(t)
        board.announce("X", "v", bits)
        return t

    assert build("01").digest() == build("01").digest()
    assert build("01").digest() != build("11").digest()
    assert "\t" in build("01").export()


def test_payload_digest_depends_on_label():
    assert payload_digest(Bits("1"), "a") != payload_digest(Bits("1"), "b")
