from __future__ import annotations

import enum

ALICE = "Alice"
BOB = "Bob"
CHARLIE = "Charlie"


def signatory(i: int) -> str:
    """Party name of the ``i``-th signatory (0-based index, 1-based name)."""
    return f"U{i + 1}"


class Verdict(str, enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    ABORT = "abort"

    def __bool__(self) -> bool:
        return self is Verdict.ACCEPT


class ProtocolError(ValueError):
    """Invalid world configuration or malformed protocol input."""
