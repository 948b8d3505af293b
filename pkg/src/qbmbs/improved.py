"""Improved broadcasting multiple blind signature.

Differences from :mod:`qbmbs.original`:

* the message is blinded as ``m' = m xor r`` before encoding, and encoded in
  an unbalanced real basis ``{b|0>+c|1>, c|0>-b|1>}``;
* every quantum transmission uses the T-mixed one-time pad keyed by
  ``H(K || nonce)``, with the nonce sent alongside in the computational
  basis, so long-term keys can be reused;
* Charlie (not Alice) distributes the EPR pairs and sacrifices ``l`` of them
  as decoys to check the channel;
* a signature is ``(beta xor K_CU) || H[(beta xor K_CU) || R]`` and both it
  and ``R`` end up on the public board for Bob's final check.
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
    concat,
    decode_classical,
    derive_key,
    encode_classical,
    hash_H,
    hash_vector_key,
    qotp_improved_decrypt,
    qotp_improved_encrypt,
)
from .netsim import Network, PublicBoard, QuantumPayload
from .qsim import (
    DEFAULT_BASIS,
    PLUS_MINUS,
    EncodingBasis,
    Qubit,
    epr_pair,
    measure_bell_pair,
    measure_qubit,
    prepare_message_qubit_improved,
    teleport_correction,
)

DEFAULT_DECOYS = 16
MAX_SETUP_ATTEMPTS = 3


class ChannelAbort(RuntimeError):
    """Decoy check found a mismatch; the entangled channel is discarded."""


def new_keys(n: int, t: int, rng) -> KeyRing:
    size = 4 * n
    return KeyRing.random(rng, t, ab=size, ac=size, bc=size, au=size, cu=size)


@dataclass(frozen=True)
class ImpSignature:
    masked_beta: Bits
    digest: Bits
    R: Bits

    @property
    def bits(self) -> Bits:
        """What is transmitted: ``masked_beta || digest`` (6n bits)."""
        return self.masked_beta + self.digest


@dataclass
class ImpWorld:
    n: int
    t: int
    l: int
    basis: EncodingBasis
    m: Bits
    r: Bits
    keys: KeyRing
    rng: np.random.Generator
    net: Network = field(default_factory=Network)
    adversary: Adversary = field(default_factory=Adversary)
    max_setup_attempts: int = MAX_SETUP_ATTEMPTS
    pads: list[tuple[str, Bits]] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ProtocolError(f"need n >= 1 and t >= 1, got n={self.n}, t={self.t}")
        if self.l < 1:
            raise ProtocolError(f"need at least one decoy pair, got l={self.l}")
        if self.basis.is_balanced:
            raise ProtocolError("the encoding basis must have b != c")
        if len(self.m) != self.n or len(self.r) != self.n:
            raise ProtocolError("message and blinding string must both have n bits")
        if self.keys.t != self.t:
            raise ProtocolError(f"key ring covers {self.keys.t} signatories, expected {self.t}")
        keys = (self.keys.AB, self.keys.AC, self.keys.BC) + self.keys.AU + self.keys.CU
        if any(len(k) != 4 * self.n for k in keys):
            raise ProtocolError("all shared keys must be 4n bits")

    @property
    def board(self) -> PublicBoard:
        return self.net.board


@dataclass
class ImpResult:
    verdicts: list[Verdict]
    combined: Verdict
    m: Bits
    r: Bits
    bob_m: Bits
    m_stars: list[Bits | None]
    signatures: list[ImpSignature | None]
    received: list[Bits | None]
    setup_attempts: list[int]
    world: ImpWorld

    @property
    def accepted(self) -> bool:
        return bool(self.combined) and all(self.verdicts)

    @property
    def transcript_digest(self) -> str:
        return self.world.net.transcript.digest()

    @property
    def board(self) -> PublicBoard:
        return self.world.net.board


def conceal(m: Sequence[int], r: Sequence[int]) -> Bits:
    """Blind the message: ``m xor r``."""
    return Bits(m) ^ r


def random_nonce(n: int, rng) -> Bits:
    return Bits.random(4 * n, rng)


# -- padded quantum transport -------------------------------------------------

def send_padded(world: ImpWorld, sender: str, receiver: str, data: list[Qubit], key: Bits, label: str) -> None:
    """Pad ``data`` with ``H(key || nonce)`` and send it with ``|nonce>``."""
    nonce = random_nonce(world.n, world.rng)
    pad = derive_key(key, nonce, 4 * len(data))
    world.pads.append((label, pad))
    qotp_improved_encrypt(data, pad)
    world.net.send(sender, receiver, QuantumPayload(data, encode_classical(nonce)), label)


def recv_padded(world: ImpWorld, receiver: str, sender: str, key: Bits) -> list[Qubit]:
    payload = world.net.recv(receiver, sender)
    nonce = decode_classical(payload.nonce, world.rng)
    return qotp_improved_decrypt(payload.data, derive_key(key, nonce, 4 * len(payload.data)))


def send_classical_padded(world, sender, receiver, bits: Bits, key: Bits, label: str) -> None:
    send_padded(world, sender, receiver, encode_classical(bits), key, label)


def recv_classical_padded(world, receiver, sender, key: Bits) -> Bits:
    return decode_classical(recv_padded(world, receiver, sender, key), world.rng)


# -- protocol steps -------------------------------------------------------------

def channel_setup(world: ImpWorld, i: int) -> list[tuple[Qubit, Qubit]]:
    """Charlie shares ``n + l`` EPR pairs with signatory ``i`` and checks ``l``
    random ones in random Z / X bases.

    Returns the ``n`` unchecked ``(signatory half, Charlie half)`` pairs in
    order; raises :class:`ChannelAbort` on any disagreement.
    """
    n, l, rng, net, u = world.n, world.l, world.rng, world.net, signatory(i)
    pairs = [epr_pair() for _ in range(n + l)]
    net.send(CHARLIE, u, QuantumPayload([p[0] for p in pairs]), "EPR halves")
    u_halves = net.recv(u, CHARLIE).data
    if len(u_halves) != n + l:
        raise ChannelAbort(f"{u} received {len(u_halves)} qubits, expected {n + l}")

    checked = sorted(rng.choice(n + l, size=l, replace=False).tolist())
    bases = Bits.random(l, rng)
    mask = Bits(1 if j in checked else 0 for j in range(n + l))
    net.send(CHARLIE, u, mask + bases, "decoy positions and bases")
    announced = net.recv(u, CHARLIE)
    u_mask, u_bases = announced[:n + l], announced[n + l:]
    u_positions = [j for j in range(n + l) if u_mask[j]]

    u_results = Bits(
        measure_qubit(u_halves[j], PLUS_MINUS if basis else None, rng)
        for j, basis in zip(u_positions, u_bases)
    )
    net.send(u, CHARLIE, u_results, "decoy outcomes")
    c_results = Bits(
        measure_qubit(pairs[j][1], PLUS_MINUS if basis else None, rng)
        for j, basis in zip(checked, bases)
    )
    if net.recv(CHARLIE, u) != c_results:
        raise ChannelAbort(f"decoy mismatch on the channel to {u}")
    return [(u_halves[j], pairs[j][1]) for j in range(n + l) if j not in checked]


def sign(message_qubits: Sequence[Qubit], u_halves: Sequence[Qubit], k_cu: Bits, rng,
         force=None) -> tuple[Bits, ImpSignature]:
    """Bell-measure each message qubit with the signatory's EPR half and
    build ``(beta xor K) || H[(beta xor K) || R]``.  Returns ``(beta, signature)``."""
    if len(message_qubits) != len(u_halves):
        raise ProtocolError(f"{len(message_qubits)} message qubits but {len(u_halves)} EPR halves")
    n = len(message_qubits)
    if len(k_cu) < 2 * n:
        raise ProtocolError("K_CU is shorter than the Bell outcome string")
    outcomes = [
        measure_bell_pair(mq, uq, rng, force=None if force is None else force[j])
        for j, (mq, uq) in enumerate(zip(message_qubits, u_halves))
    ]
    beta = concat(o.bits for o in outcomes)
    masked = beta ^ k_cu[:2 * n]
    R = Bits.random(4 * n, rng)
    return beta, ImpSignature(masked, signature_digest(masked, R), R)


def signature_digest(masked_beta: Bits, R: Bits) -> Bits:
    n = len(masked_beta) // 2
    return hash_H(masked_beta + R, 4 * n)


def charlie_verify(received: Sequence[int], k_cu: Bits, c_qubits: Sequence[Qubit], r: Bits,
                   basis: EncodingBasis, rng) -> tuple[Bits, Bits]:
    """Unmask the Bell outcomes, correct Charlie's halves, read them in
    ``basis`` and unblind.  Returns ``(beta', m*)``."""
    n = len(c_qubits)
    received = Bits(received)
    if len(received) != 6 * n:
        raise ProtocolError(f"signature has {len(received)} bits, expected {6 * n}")
    if len(r) != n:
        raise ProtocolError("blinding string length mismatch")
    beta = received[:2 * n] ^ k_cu[:2 * n]
    for j, q in enumerate(c_qubits):
        q.apply_pauli(teleport_correction((beta[2 * j], beta[2 * j + 1])))
    m_second = Bits(measure_qubit(q, basis, rng) for q in c_qubits)
    return beta, m_second ^ r


def digest_check(announced_sig: Bits, R: Bits, n: int) -> bool:
    """Recompute the digest from the announced masked outcomes and ``R``."""
    masked, digest = announced_sig[:2 * n], announced_sig[2 * n:]
    return signature_digest(masked, R) == digest


def bob_verify(m_star: Bits, m: Bits, board: PublicBoard, i: int, n: int) -> Verdict:
    """Compare ``m*`` with ``m``; if equal, check the digest from the board.

    The board must already hold Charlie's ``sig/i`` and the signatory's
    ``R/i`` entries when ``m* == m``.
    """
    if m_star != m:
        return Verdict.REJECT
    sig = board.read(f"sig/{i}", CHARLIE)
    R = board.read(f"R/{i}", signatory(i))
    return Verdict.ACCEPT if digest_check(sig, R, n) else Verdict.REJECT


def digest_sets(board: PublicBoard, t: int, n: int) -> tuple[set[Bits], set[Bits]]:
    """``F`` over every (signature, nonce) index pair and the announced ``F'``."""
    sigs = [board.read(f"multisig/{i}", CHARLIE) for i in range(t)]
    nonces = [board.read(f"R/{i}/final", signatory(i)) for i in range(t)]
    F = {signature_digest(s[:2 * n], R) for s in sigs for R in nonces}
    F_prime = {s[2 * n:] for s in sigs}
    return F, F_prime


def combine(m_star_first: Bits, m: Bits, board: PublicBoard, t: int, n: int) -> Verdict:
    """Bob's combined check: ``m*_1 == m`` and ``F' <= F``."""
    if m_star_first != m:
        return Verdict.REJECT
    F, F_prime = digest_sets(board, t, n)
    return Verdict.ACCEPT if F_prime <= F else Verdict.REJECT


def messages_agree(m_stars: Sequence[Bits | None]) -> bool:
    return bool(m_stars) and None not in m_stars and all(x == m_stars[0] for x in m_stars)


def random_blinding(n: int, rng) -> Bits:
    return Bits.random(n, rng)


def run(n: int, t: int, rng=None, *, l: int = DEFAULT_DECOYS, basis: EncodingBasis = DEFAULT_BASIS,
        m: Sequence[int] | None = None, r: Sequence[int] | None = None, keys: KeyRing | None = None,
        adversary: Adversary | None = None, max_setup_attempts: int = MAX_SETUP_ATTEMPTS) -> ImpResult:
    """Execute one full run of the improved scheme."""
    if n < 1 or t < 1:
        raise ProtocolError(f"need n >= 1 and t >= 1, got n={n}, t={t}")
    rng = np.random.default_rng(rng)
    world = ImpWorld(
        n=n,
        t=t,
        l=l,
        basis=basis,
        m=Bits.random(n, rng) if m is None else Bits(m),
        r=random_blinding(n, rng) if r is None else Bits(r),
        keys=new_keys(n, t, rng) if keys is None else keys,
        rng=rng,
        adversary=adversary or Adversary(),
        max_setup_attempts=max_setup_attempts,
    )
    adv, net, K = world.adversary, world.net, world.keys
    adv.install(world)
    m_blind = conceal(world.m, world.r)

    # initial phase: |m> to Bob, |r> to Charlie
    send_classical_padded(world, ALICE, BOB, world.m, K.AB, "E(m)")
    bob_m = recv_classical_padded(world, BOB, ALICE, K.AB)
    send_classical_padded(world, ALICE, CHARLIE, world.r, K.AC, "E(r)")
    charlie_r = recv_classical_padded(world, CHARLIE, ALICE, K.AC)

    verdicts: list[Verdict] = []
    m_stars: list[Bits | None] = []
    signatures: list[ImpSignature | None] = []
    received: list[Bits | None] = []
    attempts: list[int] = []
    for i in range(t):
        u = signatory(i)
        pairs = None
        for attempt in range(1, world.max_setup_attempts + 1):
            try:
                pairs = channel_setup(world, i)
                break
            except ChannelAbort:
                continue
        attempts.append(attempt)
        if pairs is None:
            verdicts.append(Verdict.ABORT)
            m_stars.append(None)
            signatures.append(None)
            received.append(None)
            continue

        message = [Qubit(prepare_message_qubit_improved(b, world.basis)) for b in m_blind]
        send_padded(world, ALICE, u, message, K.AU[i], "E(psi(m'))")
        message = recv_padded(world, u, ALICE, K.AU[i])
        adv.signatory_decrypted(world, i, message)
        beta, sig = sign(message, [p[0] for p in pairs], K.CU[i], rng)
        adv.signatory_signed(world, i, beta)
        signatures.append(sig)

        # |S_i> under the six-segment pad
        data = encode_classical(sig.bits)
        nonces = [random_nonce(n, rng) for _ in range(6)]
        pad = hash_vector_key(K.CU[i], nonces)
        world.pads.append(("E(S)", pad))
        qotp_improved_encrypt(data, pad)
        net.send(u, CHARLIE, QuantumPayload(data, encode_classical(concat(nonces))), "E(S)")

        payload = net.recv(CHARLIE, u)
        got_nonces = decode_classical(payload.nonce, rng).chunks(4 * n)
        s_prime = decode_classical(qotp_improved_decrypt(payload.data, hash_vector_key(K.CU[i], got_nonces)), rng)
        s_prime = Bits(adv.charlie_decoded(world, i, s_prime))
        received.append(s_prime)
        _, m_star = charlie_verify(s_prime, K.CU[i], [p[1] for p in pairs], charlie_r, world.basis, rng)
        m_stars.append(m_star)

        send_classical_padded(world, CHARLIE, BOB, m_star, K.BC, "E(m*)")
        bob_m_star = recv_classical_padded(world, BOB, CHARLIE, K.BC)
        if bob_m_star == bob_m:
            net.announce(CHARLIE, f"sig/{i}", s_prime)
            net.announce(u, f"R/{i}", sig.R)
        verdicts.append(bob_verify(bob_m_star, bob_m, world.board, i, n))

    # combined phase
    if not messages_agree(m_stars):
        combined = Verdict.REJECT
    else:
        send_classical_padded(world, CHARLIE, BOB, m_stars[0], K.BC, "E(m*_1)")
        first = recv_classical_padded(world, BOB, CHARLIE, K.BC)
        if first != bob_m:
            combined = Verdict.REJECT
        else:
            multisig = adv.charlie_multisignature(world, list(received))
            for i, s in enumerate(multisig):
                net.announce(CHARLIE, f"multisig/{i}", s)
            for i, sig in enumerate(signatures):
                net.announce(signatory(i), f"R/{i}/final", sig.R)
            combined = combine(first, bob_m, world.board, t, n)

    return ImpResult(
        verdicts=verdicts,
        combined=combined,
        m=world.m,
        r=world.r,
        bob_m=bob_m,
        m_stars=m_stars,
        signatures=signatures,
        received=received,
        setup_attempts=attempts,
        world=world,
    )
