"""
Progress and diagnostic logging hooks.

Library entry points accept a keyword-only ``log`` argument. The base `Logger`
discards every message (after checking that it formats), so passing nothing is
silent. Subclass it and override `Logger.message` to send messages somewhere, or
override individual hooks for structured handling.
"""

from __future__ import annotations

import sys
from typing import Any, TextIO


class Logger:
    def message(self, msg: str, *args: Any) -> None:
        assert (msg % args) is not None

    def on_cover(self, members: int, delta: int, cells: int, /) -> None:
        self.message("Cover: %d members cover %d open cells exactly %d times", members, cells, delta)

    def on_violation(self, where: Any, observed: int, expected: int, /) -> None:
        self.message("Violation: multiplicity %d (expected %d) at %s", observed, expected, where)

    def on_member_chosen(self, member: Any, volume: Any, /) -> None:
        self.message("Chosen member: %s with unit-cube volume %s", member, volume)

    def on_retry(self, attempt: int, reason: str, /) -> None:
        self.message("Retry %d: %s", attempt, reason)

    def on_separation(self, method: str, halfspace: Any, /) -> None:
        self.message("Separation (%s): %s", method, halfspace)

    def on_trivial_line(self, line: Any, /) -> None:
        self.message("Trivial: %s misses the interior of the bounding box", line)

    def on_certificate(self, ok: bool, summary: Any, /) -> None:
        self.message("Certificate [%s]: %s", "ok" if ok else "FAILED", summary)

    def on_classify(self, member: Any, label: str, /) -> None:
        self.message("Classified half-flat against %s: %s", member, label)

    def on_partition(self, up: int, down: int, counts: Any, /) -> None:
        self.message("Partition: %d up, %d down (a/b/c counts %s)", up, down, counts)


class ConsoleLogger(Logger):
    def message(self, msg: str, *args: Any) -> None:
        print(msg % args)


class StreamLogger(Logger):
    """
    Write messages, one per line, to a text stream (standard error by default).
    """

    def __init__(self, stream: TextIO | None = None) -> None:
        self._stream = stream if stream is not None else sys.stderr

    def message(self, msg: str, *args: Any) -> None:
        print(msg % args, file=self._stream)
