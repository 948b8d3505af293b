"""The teleportation-based broadcasting multiple blind signature, as published.

Each message bit travels as ``(|0> +/- |1>)/sqrt(2)``; Alice pairs it with
half of an EPR pair whose other half goes to Charlie.  A signatory's
Bell-measurement outcomes are his signature, and Charlie uses them to
finish the teleportation and read the message back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .adversary import Adversary
from .common import ALICE, BOB, CHARLIE, ProtocolError, Verdict, signatory
from .crypto import (
    Bits,
    KeyRing,
    classical_otp,
    concat,
    decode_classical,
    encode_classical,
    qotp_basic_decrypt,
    qotp_basic_encrypt,
)
from .netsim import Network, QuantumPayload
from .qsim import (
    PLUS_MINUS,
    BellOutcome,
    Qubit,
    epr_pair,
    measure_bell_pair,
    measure_qubit,
    prepare_message_qubit_original,
    teleport_correction,
)

SN_BITS = 16


def key_lengths(n: int) -> dict[str, int]:
    """Key sizes: n-bit classical pads, two pad bits per transported qubit."""
    return {
        "ab": n,
        "bc": n,
        "ac": 2 * (n + SN_BITS),
        "au": 2 * (2 * n + SN_BITS),
        "cu": 2 * n + SN_BITS,
    }


def new_keys(n: int, t: int, rng) -> KeyRing:
    return KeyRing.random(rng, t, **key_lengths(n))


@dataclass
class OrigWorld:
    n: int
    t: int
    m: Bits
    keys: KeyRing
    rng: np.random.Generator
    net: Network = field(default_factory=Network)
    adversary: Adversary = field(default_factory=Adversary)
    serials: list[Bits] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ProtocolError(f"need n >= 1 and t >= 1, got n={self.n}, t={self.t}")
        if len(self.m) != self.n:
            raise ProtocolError(f"message has {len(self.m)} bits, expected {self.n}")
        expected = key_lengths(self.n)
        if self.keys.t != self.t:
            raise ProtocolError(f"key ring covers {self.keys.t} signatories, expected {self.t}")
        for name, size in (("AB", expected["ab"]), ("BC", expected["bc"]), ("AC", expected["ac"])):
            if len(getattr(self.keys, name)) != size:
                raise ProtocolError(f"K_{name} must be {size} bits")
        if any(len(k) != expected["au"] for k in self.keys.AU) or any(len(k) != expected["cu"] for k in self.keys.CU):
            raise ProtocolError("signatory keys have the wrong length")


@dataclass
class OrigSignature:
    S: Bits
    SN: Bits

    def __post_init__(self):
        if len(self.S) % 2:
            raise ProtocolError("a signature holds two bits per message position")


@dataclass
class OrigResult:
    verdicts: list[Verdict]
    combined: Verdict
    m: Bits
    bob_m: Bits
    recovered: list[Bits]
    signatures: list[OrigSignature]
    multisignature: list[OrigSignature]
    world: OrigWorld

    @property
    def accepted(self) -> bool:
        return bool(self.combined) and all(self.verdicts)

    @property
    def transcript_digest(self) -> str:
        return self.world.net.transcript.digest()


def prepare_register(bit: int) -> tuple[Qubit, Qubit, Qubit]:
    """Message qubit M plus an EPR pair (A, C)."""
    a, c = epr_pair()
    return Qubit(prepare_message_qubit_original(bit)), a, c


def sign(pairs: Sequence[tuple[Qubit, Qubit]], rng, force: Sequence[BellOutcome] | None = None) -> Bits:
    """Bell-measure every ``(M, A)`` pair; the outcomes ``kl`` concatenated
    form the signature.  ``force`` pins the outcomes (test hook)."""
    if force is not None and len(force) != len(pairs):
        raise ProtocolError(f"{len(force)} forced outcomes for {len(pairs)} pairs")
    outcomes = [
        measure_bell_pair(mq, aq, rng, force=None if force is None else force[j])
        for j, (mq, aq) in enumerate(pairs)
    ]
    return concat(o.bits for o in outcomes)


def outcomes_of(signature: Sequence[int]) -> list[BellOutcome]:
    bits = Bits(signature)
    if len(bits) % 2:
        raise ProtocolError("signature length must be even")
    return [BellOutcome(bits[2 * j], bits[2 * j + 1]) for j in range(len(bits) // 2)]


def charlie_recover(signature: Sequence[int], c_qubits: Sequence[Qubit], rng) -> Bits:
    """Undo the teleportation per position and read each qubit in the
    plus/minus basis."""
    outcomes = outcomes_of(signature)
    if len(outcomes) != len(c_qubits):
        raise ProtocolError(f"signature covers {len(outcomes)} positions, Charlie holds {len(c_qubits)} qubits")
    for q, beta in zip(c_qubits, outcomes):
        q.apply_pauli(teleport_correction(beta))
    return Bits(measure_qubit(q, PLUS_MINUS, rng) for q in c_qubits)


def combine(recovered: Sequence[Bits], bob_m: Bits) -> Verdict:
    """Charlie's equality check over all recovered messages, then Bob's
    comparison of the first one with his copy of m."""
    if not recovered:
        raise ProtocolError("no signatures collected")
    if any(r != recovered[0] for r in recovered[1:]):
        return Verdict.REJECT
    return Verdict.ACCEPT if recovered[0] == bob_m else Verdict.REJECT


def run(n: int, t: int, rng=None, *, m: Sequence[int] | None = None, keys: KeyRing | None = None,
        adversary: Adversary | None = None) -> OrigResult:
    """Execute one full run of the original scheme."""
    if n < 1 or t < 1:
        raise ProtocolError(f"need n >= 1 and t >= 1, got n={n}, t={t}")
    rng = np.random.default_rng(rng)
    world = OrigWorld(
        n=n,
        t=t,
        m=Bits.random(n, rng) if m is None else Bits(m),
        keys=new_keys(n, t, rng) if keys is None else keys,
        rng=rng,
        adversary=adversary or Adversary(),
    )
    adv, net, K = world.adversary, world.net, world.keys
    adv.install(world)

    net.send(ALICE, BOB, classical_otp(world.m, K.AB), "E_AB(m)")

    # Alice: message qubits, EPR pairs and serial numbers for every signatory
    for i in range(t):
        sn = Bits.from_int(i + 1, SN_BITS)
        world.serials.append(sn)
        registers = adv.alice_prepared(world, i, [prepare_register(b) for b in world.m])
        to_u = [q for mq, aq, _ in registers for q in (mq, aq)] + encode_classical(sn)
        net.send(ALICE, signatory(i), QuantumPayload(qotp_basic_encrypt(to_u, K.AU[i])), "E_AU(psi_MA,SN)")
        to_c = [cq for _, _, cq in registers] + encode_classical(sn)
        net.send(ALICE, CHARLIE, QuantumPayload(qotp_basic_encrypt(to_c, K.AC)), "E_AC(phi_C,SN)")

    # signatories
    signatures = []
    for i in range(t):
        qubits = qotp_basic_decrypt(net.recv(signatory(i), ALICE).data, K.AU[i])
        ma, sn_qubits = qubits[:2 * n], qubits[2 * n:]
        sn = decode_classical(sn_qubits, rng)
        m_qubits, a_qubits = ma[0::2], ma[1::2]
        adv.signatory_decrypted(world, i, m_qubits)
        s_i = sign(list(zip(m_qubits, a_qubits)), rng)
        adv.signatory_signed(world, i, s_i)
        signatures.append(OrigSignature(s_i, sn))
        net.send(signatory(i), CHARLIE, classical_otp(s_i + sn, K.CU[i]), "E_CU(S,SN)")

    # Charlie: file the C batches by serial number, then verify each signature
    batches: dict[Bits, list[Qubit]] = {}
    for _ in range(t):
        qubits = qotp_basic_decrypt(net.recv(CHARLIE, ALICE).data, K.AC)
        batches[decode_classical(qubits[n:], rng)] = qubits[:n]
    received, recovered = [], []
    for i in range(t):
        plain = classical_otp(net.recv(CHARLIE, signatory(i)), K.CU[i])
        sig = OrigSignature(plain[:2 * n], plain[2 * n:])
        received.append(sig)
        c_qubits = batches.pop(sig.SN, None)
        if c_qubits is None:
            recovered.append(None)
            continue
        m_prime = charlie_recover(sig.S, c_qubits, rng)
        recovered.append(m_prime)
        net.send(CHARLIE, BOB, classical_otp(m_prime, K.BC), "E_BC(m')")

    # Bob: individual verdicts
    bob_m = classical_otp(net.recv(BOB, ALICE), K.AB)
    verdicts = []
    for r in recovered:
        if r is None:
            verdicts.append(Verdict.REJECT)
            continue
        verdicts.append(Verdict.ACCEPT if classical_otp(net.recv(BOB, CHARLIE), K.BC) == bob_m else Verdict.REJECT)

    # combined phase
    multisig = adv.charlie_multisignature(world, list(received))
    if any(r is None for r in recovered) or any(r != recovered[0] for r in recovered[1:]):
        combined = Verdict.REJECT
    else:
        net.send(CHARLIE, BOB, classical_otp(recovered[0], K.BC), "E_BC(m'_1)")
        first = classical_otp(net.recv(BOB, CHARLIE), K.BC)
        combined = combine([first], bob_m)

    return OrigResult(
        verdicts=verdicts,
        combined=combined,
        m=world.m,
        bob_m=bob_m,
        recovered=recovered,
        signatures=signatures,
        multisignature=multisig,
        world=world,
    )
