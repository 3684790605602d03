"""Age penalty: expected squared estimation error as a function of information age.

For linear dynamics ``x' = A x + B u + w`` with noise covariance ``Sigma``,
the expected squared error attributable to information that is ``delta``
sampling periods old is

    g(delta) = sum_{r=1}^{delta-1} tr((A^T)^r A^r Sigma),

an empty sum for ``delta == 1``: the freshest achievable packet carries
everything predictable.  The network state cost is the sum of g over all
sub-systems at their current ages.

Tree search evaluates g at predicted ages millions of times per run, so the
partial sums are memoized per sub-system in growable prefix arrays.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from .timing import SamplingCalendar, TimingState


class PenaltyTable:
    """Memoized age penalties g_i(delta) for a set of sub-systems."""

    def __init__(self, dynamics: Sequence, noise_covs: Sequence):
        if len(dynamics) != len(noise_covs):
            raise ValueError("need one noise covariance per dynamics matrix")
        self._a = [np.atleast_2d(np.asarray(a, dtype=float)) for a in dynamics]
        self._sigma = [np.atleast_2d(np.asarray(s, dtype=float)) for s in noise_covs]
        for a, s in zip(self._a, self._sigma):
            if a.shape[0] != a.shape[1] or a.shape != s.shape:
                raise ValueError("A and Sigma must be square and of equal size")
        # _sums[i][d-1] == g_i(d); _powers[i] is A_i^r for the next term r
        self._sums: List[List[float]] = [[0.0] for _ in self._a]
        self._powers = [a.copy() for a in self._a]

    @classmethod
    def from_models(cls, models: Sequence) -> "PenaltyTable":
        """Build from objects exposing ``A`` and ``Sigma`` attributes."""
        return cls([m.A for m in models], [m.Sigma for m in models])

    def __len__(self) -> int:
        return len(self._a)

    def ensure(self, i: int, delta: int) -> None:
        """Grow sub-system i's table so ages up to ``delta`` are plain lookups."""
        sums = self._sums[i]
        if delta <= len(sums):
            return
        a = self._a[i]
        sigma = self._sigma[i]
        power = self._powers[i]
        with np.errstate(over="ignore", invalid="ignore"):
            while len(sums) < delta:
                term = float(np.trace(power.T @ power @ sigma))
                sums.append(sums[-1] + term)
                power = power @ a
        self._powers[i] = power

    def g(self, i: int, delta: int) -> float:
        """Age penalty of sub-system ``i`` at age ``delta`` (>= 1)."""
        if delta < 1:
            raise ValueError(f"age must be >= 1, got {delta}")
        self.ensure(i, delta)
        return self._sums[i][delta - 1]

    def partial_sums(self, i: int) -> List[float]:
        """Live prefix-sum list with ``partial_sums(i)[d-1] == g_i(d)``.

        Grows in place through :meth:`ensure`; callers must treat it as
        read-only.  Exposed for the scheduler's inner loop.
        """
        return self._sums[i]

    def state_cost(self, state: TimingState, calendars: Sequence[SamplingCalendar]) -> float:
        """Total expected MSE of the network in ``state`` (sum of per-age penalties)."""
        total = 0.0
        for i, cal in enumerate(calendars):
            total += self.g(i, cal.aoi(state.t, state.t_u[i]))
        return total
