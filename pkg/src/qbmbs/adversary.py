"""Hook points that let an attack interfere with a protocol run.

The protocol drivers call these methods at fixed points; the defaults do
nothing, so ``Adversary()`` is the honest run.  Channel interference goes
through :meth:`install`, which registers taps on the world's network.
"""
from __future__ import annotations


class Adversary:
    def install(self, world) -> None:
        """Register channel taps before any message is sent."""

    def alice_prepared(self, world, i: int, registers: list) -> list:
        """Original scheme: Alice's ``(M, A, C)`` triples for signatory ``i``
        just before encryption.  Return the triples actually sent."""
        return registers

    def signatory_decrypted(self, world, i: int, message_qubits: list) -> None:
        """Signatory ``i`` has decrypted the message qubits and is about to sign."""

    def signatory_signed(self, world, i: int, beta) -> None:
        """Signatory ``i`` obtained the Bell outcome string ``beta``."""

    def charlie_decoded(self, world, i: int, bits):
        """Improved scheme: the signature bits Charlie read off the channel."""
        return bits

    def charlie_multisignature(self, world, signatures: list) -> list:
        """The multi-signature Charlie hands on once he has confirmed the message."""
        return signatures
