"""Simulated channels, taps, public board and transcript.

Every world owns one :class:`Network`.  Channels are created lazily per
(sender, receiver) pair, deliver in send order, and may carry a tap: a
synchronous callback that sees each payload and returns what is actually
delivered.  Quantum payloads move by handing over the qubit handles; there
is no way to copy them.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .crypto import Bits
from .qsim import Qubit

BOARD = "board"


@dataclass(eq=False)
class QuantumPayload:
    """Qubits in transit: the padded ``data`` register plus the nonce
    register that travels with it in the clear."""

    data: list[Qubit]
    nonce: list[Qubit] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.data) + len(self.nonce)


Payload = Union[Bits, QuantumPayload]
Tap = Callable[[Payload, str], Payload]


@dataclass(frozen=True)
class Event:
    time: int
    sender: str
    receiver: str
    kind: str
    label: str
    digest: str

    def line(self) -> str:
        return f"{self.time}\t{self.sender}\t{self.receiver}\t{self.kind}\t{self.digest}"


def payload_digest(payload: Payload, label: str = "") -> str:
    h = hashlib.sha256(label.encode())
    if isinstance(payload, QuantumPayload):
        h.update(f"|quantum|{len(payload.data)}|{len(payload.nonce)}".encode())
    else:
        h.update(b"|classical|" + Bits(payload).to_bytes())
    return h.hexdigest()


class Transcript:
    """Append-only log of every send and announcement."""

    def __init__(self):
        self._events: list[Event] = []

    def record(self, sender: str, receiver: str, kind: str, label: str, digest: str) -> Event:
        event = Event(len(self._events), sender, receiver, kind, label, digest)
        self._events.append(event)
        return event

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(self._events)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(tuple(self._events))

    def export(self) -> str:
        """One tab-separated record per line: time, from, to, kind, digest."""
        return "".join(e.line() + "\n" for e in self._events)

    def digest(self) -> str:
        return hashlib.sha256(self.export().encode()).hexdigest()


@dataclass(frozen=True)
class BoardEntry:
    who: str
    label: str
    value: Bits


class PublicBoard:
    """Append-only announcements readable by everyone.  There is no
    interface for editing or removing an entry."""

    def __init__(self, transcript: Transcript | None = None):
        self._entries: list[BoardEntry] = []
        self._transcript = transcript

    def announce(self, who: str, label: str, value) -> BoardEntry:
        entry = BoardEntry(who, label, Bits(value))
        self._entries.append(entry)
        if self._transcript is not None:
            self._transcript.record(who, BOARD, "announce", label, payload_digest(entry.value, label))
        return entry

    @property
    def entries(self) -> tuple[BoardEntry, ...]:
        return tuple(self._entries)

    def read(self, label: str, who: str | None = None) -> Bits:
        """Latest value announced under ``label`` (optionally by ``who``)."""
        for entry in reversed(self._entries):
            if entry.label == label and (who is None or entry.who == who):
                return entry.value
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self._entries)


class Channel:
    def __init__(self, sender: str, receiver: str, transcript: Transcript):
        self.sender = sender
        self.receiver = receiver
        self.tap: Tap | None = None
        self._queue: deque[Payload] = deque()
        self._transcript = transcript
        self.sent = 0

    def send(self, payload: Payload, label: str = "") -> None:
        if not isinstance(payload, (Bits, QuantumPayload)):
            payload = Bits(payload)
        if self.tap is not None:
            payload = self.tap(payload, label)
        kind = "quantum" if isinstance(payload, QuantumPayload) else "classical"
        self._transcript.record(self.sender, self.receiver, kind, label, payload_digest(payload, label))
        self._queue.append(payload)
        self.sent += 1

    def recv(self) -> Payload:
        if not self._queue:
            raise LookupError(f"nothing pending on {self.sender}->{self.receiver}")
        return self._queue.popleft()

    def pending(self) -> int:
        return len(self._queue)


class Network:
    def __init__(self):
        self.transcript = Transcript()
        self.board = PublicBoard(self.transcript)
        self._channels: dict[tuple[str, str], Channel] = {}

    def channel(self, sender: str, receiver: str) -> Channel:
        key = (sender, receiver)
        if key not in self._channels:
            self._channels[key] = Channel(sender, receiver, self.transcript)
        return self._channels[key]

    def tap(self, sender: str, receiver: str, fn: Tap) -> None:
        self.channel(sender, receiver).tap = fn

    def send(self, sender: str, receiver: str, payload: Payload, label: str = "") -> None:
        self.channel(sender, receiver).send(payload, label)

    def recv(self, receiver: str, sender: str) -> Payload:
        return self.channel(sender, receiver).recv()

    def announce(self, who: str, label: str, value) -> BoardEntry:
        return self.board.announce(who, label, value)

    @property
    def send_count(self) -> int:
        return sum(ch.sent for ch in self._channels.values())
