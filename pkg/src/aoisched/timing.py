"""Slot-level timing: sampling calendars, timestamp vectors, age of information.

The network state of the scheduler is the current slot together with three
timestamp vectors per sub-system:

``t_g[i]``
    generation slot of the packet sitting in sensor i's one-slot buffer,
``t_r[i]``
    generation slot of the freshest packet received by controller i,
``t_u[i]``
    generation slot of the latest packet actually utilized by controller i.

All three are monotone in time and satisfy ``t_u <= t_r <= t_g <= t``.
Before a sub-system's first sampling event all three sit at the cold-start
value ``offset - period`` so that ages stay well defined (and >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class SamplingCalendar:
    """Periodic sampling schedule of one sub-system.

    Sampling events occur at slots ``offset + k * period`` for k = 0, 1, ...
    """

    period: int
    offset: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"period must be >= 1, got {self.period}")
        if not 0 <= self.offset < self.period:
            raise ValueError(
                f"offset must lie in [0, period), got {self.offset} with period {self.period}"
            )

    def contains(self, t: int) -> bool:
        """True if slot ``t`` is a sampling event."""
        return t >= self.offset and (t - self.offset) % self.period == 0

    def sampling_index(self, t: int) -> int:
        """Index of the sampling period slot ``t`` belongs to.

        Floor division toward negative infinity; slots before the first
        sampling event map to negative indices.
        """
        return (t - self.offset) // self.period

    def aoi(self, t: int, t_u: int) -> int:
        """Age of information at slot ``t``, in sampling periods.

        The age of a packet generated at slot ``t_u`` is the number of
        sampling periods it spans, ``ceil((t - t_u) / period)``.  In a
        running system ``t_u < t`` always holds, so the result is >= 1.
        """
        return -((t_u - t) // self.period)

    def cold_start(self) -> int:
        """Timestamp value used before the first sampling event."""
        return self.offset - self.period


@dataclass(frozen=True)
class TimingState:
    """Current slot plus the per-sub-system timestamp triples."""

    t: int
    t_g: Tuple[int, ...]
    t_r: Tuple[int, ...]
    t_u: Tuple[int, ...]

    @classmethod
    def cold(cls, calendars: Sequence[SamplingCalendar]) -> "TimingState":
        """State one slot before operation starts (advance into slot 0 next)."""
        cold = tuple(c.cold_start() for c in calendars)
        return cls(t=-1, t_g=cold, t_r=cold, t_u=cold)

    def __post_init__(self):
        if not len(self.t_g) == len(self.t_r) == len(self.t_u):
            raise ValueError("timestamp vectors must have equal length")
        for g, r, u in zip(self.t_g, self.t_r, self.t_u):
            if not u <= r <= g <= self.t:
                raise ValueError(f"timestamps violate t_u <= t_r <= t_g <= t: {self}")


def advance_generation(cal: SamplingCalendar, t_next: int, t_g: int) -> int:
    """Generation timestamp when entering slot ``t_next``.

    A fresh sample replaces the buffer content exactly at sampling events.
    """
    return t_next if cal.contains(t_next) else t_g


def record_reception(t_g: int, t_r: int, scheduled: bool, success: bool) -> int:
    """Reception timestamp after the previous slot's transmission resolved.

    A successful scheduled transmission delivers the buffered packet, so the
    reception timestamp jumps to its generation slot.
    """
    if success and not scheduled:
        raise ValueError("transmission success reported for an unscheduled sub-system")
    return t_g if (scheduled and success) else t_r


def utilize(cal: SamplingCalendar, t_next: int, t_r_next: int, t_u: int) -> int:
    """Utilization timestamp when entering slot ``t_next``.

    Received packets are picked up only at sampling events, when the
    controller computes its next input.
    """
    return t_r_next if cal.contains(t_next) else t_u


def advance(
    state: TimingState,
    calendars: Sequence[SamplingCalendar],
    scheduled: Optional[int] = None,
    success: bool = False,
) -> TimingState:
    """Advance the network state by one slot.

    ``scheduled``/``success`` describe the transmission of slot ``state.t``;
    its effect becomes visible in slot ``state.t + 1``.  Order of updates:
    reception first (it reads the old generation timestamp), then generation,
    then utilization (it reads the new reception timestamp).
    """
    if success and scheduled is None:
        raise ValueError("transmission success reported without a scheduled sub-system")
    t1 = state.t + 1
    n = len(calendars)
    t_r = tuple(
        record_reception(state.t_g[i], state.t_r[i], scheduled == i, success and scheduled == i)
        for i in range(n)
    )
    t_g = tuple(advance_generation(calendars[i], t1, state.t_g[i]) for i in range(n))
    t_u = tuple(utilize(calendars[i], t1, t_r[i], state.t_u[i]) for i in range(n))
    return TimingState(t=t1, t_g=t_g, t_r=t_r, t_u=t_u)


def admissible_actions(state: TimingState) -> Tuple[Optional[int], ...]:
    """Actions available in ``state``: sub-systems holding an undelivered packet, then idle.

    Idle (``None``) is always available and listed last, matching the
    tie-break preference order used by the schedulers.
    """
    acts: Tuple[Optional[int], ...] = tuple(
        i for i in range(len(state.t_g)) if state.t_g[i] > state.t_r[i]
    )
    return acts + (None,)
