"""Deterministic-seeded discrete-event simulation kernel.

A small future-event-list engine: events carry a timestamp and a monotone
insertion counter, and dispatch in (time, sequence) lexicographic order, so
ties resolve by insertion and every run with the same seed and schedule is
bit-reproducible. Sampling helpers wrap numpy generators; independent streams
are derived from a root seed with named purposes so that adding a consumer
never perturbs the draws of another.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "SchedulingError",
    "OrderAuditError",
    "EventRecord",
    "Simulator",
    "CapacityQueue",
    "RandomStream",
    "spawn_streams",
    "sample_normal_positive",
    "sample_exponential",
    "exponential_quantile",
]


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current clock."""


class OrderAuditError(AssertionError):
    """Raised by the audit hook when dispatch order is ever non-monotone."""


@dataclass(frozen=True)
class EventRecord:
    time: float
    sequence: int
    kind: str
    subject: object = None


class Simulator:
    """Event calendar plus clock. Handlers are registered per event kind."""

    def __init__(self, audit: bool = False):
        self._heap: list[tuple[float, int, str, object]] = []
        self._seq = 0
        self._clock = 0.0
        self._handlers: dict[str, Callable] = {}
        self._audit = audit
        self._last_dispatched: tuple[float, int] | None = None
        self._stop = False

    @property
    def clock(self) -> float:
        return self._clock

    def now(self) -> float:
        return self._clock

    def on(self, kind: str, handler: Callable) -> None:
        self._handlers[kind] = handler

    def schedule(self, time: float, kind: str, subject: object = None) -> EventRecord:
        if time < self._clock:
            raise SchedulingError(
                f"cannot schedule {kind!r} at t={time} before clock t={self._clock}"
            )
        ev = EventRecord(time, self._seq, kind, subject)
        heapq.heappush(self._heap, (time, ev.sequence, kind, subject))
        self._seq += 1
        return ev

    def pending(self) -> int:
        return len(self._heap)

    def request_stop(self) -> None:
        """Ask the running dispatch loop to stop after the current event."""
        self._stop = True

    def run(self, until: float) -> int:
        """Dispatch every event with time <= until, in order; clock ends at until.

        A handler may cut the run short via request_stop(); the clock then
        stays at the last dispatched event.
        """
        if until < self._clock:
            raise SchedulingError(f"cannot run to t={until} before clock t={self._clock}")
        count = 0
        self._stop = False
        while self._heap and self._heap[0][0] <= until:
            time, seq, kind, subject = heapq.heappop(self._heap)
            if self._audit:
                key = (time, seq)
                if self._last_dispatched is not None and key < self._last_dispatched:
                    raise OrderAuditError(
                        f"event {key} dispatched after {self._last_dispatched}"
                    )
                self._last_dispatched = key
            self._clock = time
            handler = self._handlers.get(kind)
            if handler is not None:
                handler(time, subject)
            count += 1
            if self._stop:
                return count
        self._clock = until
        return count

    def run_until_empty(self) -> int:
        return self.run(math.inf) if self._heap else 0


class CapacityQueue:
    """FIFO queue with an optional hard capacity."""

    def __init__(self, name: str, capacity: int | None = None):
        if capacity is not None and capacity < 1:
            raise ValueError(f"{name}: capacity must be positive, got {capacity}")
        self.name = name
        self.capacity = capacity
        self._items: deque = deque()

    def __len__(self) -> int:
        return len(self._items)

    @property
    def free(self) -> float:
        if self.capacity is None:
            return math.inf
        return self.capacity - len(self._items)

    def push(self, item) -> None:
        if self.capacity is not None and len(self._items) >= self.capacity:
            raise OverflowError(f"{self.name}: queue is full (capacity {self.capacity})")
        self._items.append(item)

    def pop(self):
        return self._items.popleft()

    def peek(self):
        return self._items[0]


class RandomStream:
    """A named, reproducible stream of draws.

    Streams with the same (seed, key) always replay the same sequence. The
    underlying bit generator is exposed so that compiled consumers can draw
    from the identical state through numpy's C interface.
    """

    def __init__(self, seed_seq: np.random.SeedSequence):
        self.bit_generator = np.random.PCG64(seed_seq)
        self.generator = np.random.Generator(self.bit_generator)

    def uniform(self) -> float:
        return self.generator.random()

    def bernoulli(self, p: float) -> bool:
        return self.generator.random() < p


def spawn_streams(seed: int, key: tuple[int, ...], purposes: Iterable[str]) -> dict[str, RandomStream]:
    """Independent streams for one simulation context.

    The key is folded into the seed sequence, so stream derivation is pure:
    parallel and serial callers that use the same (seed, key) agree exactly.
    """
    out = {}
    for i, purpose in enumerate(purposes):
        ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key) + (i,))
        out[purpose] = RandomStream(ss)
    return out


def sample_normal_positive(stream: RandomStream, mean: float, sd: float) -> float:
    """One draw from Normal(mean, sd), rejection-resampled until positive."""
    if sd < 0:
        raise ValueError(f"sd must be >= 0, got {sd}")
    if sd == 0:
        if mean <= 0:
            raise ValueError(f"degenerate normal with mean {mean} can never be positive")
        return mean
    x = stream.generator.normal(mean, sd)
    while x <= 0.0:
        x = stream.generator.normal(mean, sd)
    return x


def sample_exponential(stream: RandomStream, rate: float) -> float:
    """Exponential draw with the given rate (per unit time)."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return stream.generator.standard_exponential() / rate


def exponential_quantile(u: float, rate: float) -> float:
    """Inverse CDF of the exponential distribution at probability u."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    return -math.log1p(-u) / rate
