"""Shared wireless link: block-fading Bernoulli loss per sub-system.

Loss probabilities are redrawn independently per link at every coherence-time
boundary from a rectified Gaussian (a normal draw clamped to [0, 1]) and held
constant within the block.  Blocks are anchored at absolute slot 0 for all
links.  The scheduler may observe the current probabilities but never the
coherence time.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from . import seeds


class LossProcess:
    """Per-link loss probability trajectory plus seeded outcome draws.

    One fading stream and one outcome stream per link; an instance is
    confined to a single simulation run.  ``transmit`` consumes exactly one
    outcome draw per call, so drawing once per link per slot keeps outcome
    sequences aligned across runs that schedule differently.
    """

    def __init__(
        self,
        n_links: int,
        loss_mean: float,
        loss_std: float,
        coherence: int,
        fading_rngs: Sequence[np.random.Generator],
        outcome_rngs: Sequence[np.random.Generator],
    ):
        if loss_std < 0:
            raise ValueError(f"loss_std must be >= 0, got {loss_std}")
        if coherence < 1:
            raise ValueError(f"coherence must be >= 1, got {coherence}")
        if len(fading_rngs) != n_links or len(outcome_rngs) != n_links:
            raise ValueError("need one fading and one outcome stream per link")
        self.n_links = n_links
        self.loss_mean = loss_mean
        self.loss_std = loss_std
        self.coherence = coherence
        self._fading = list(fading_rngs)
        self._outcome = list(outcome_rngs)
        # placeholder until the first block boundary is processed
        self._p = np.full(n_links, min(max(loss_mean, 0.0), 1.0))

    @classmethod
    def seeded(
        cls,
        n_links: int,
        loss_mean: float,
        loss_std: float,
        coherence: int,
        master_seed: int,
        repetition: int = 0,
    ) -> "LossProcess":
        """Build with streams derived from the master seed (see :mod:`aoisched.seeds`)."""
        fading = [seeds.stream(master_seed, repetition, seeds.FADING, i) for i in range(n_links)]
        outcome = [seeds.stream(master_seed, repetition, seeds.OUTCOME, i) for i in range(n_links)]
        return cls(n_links, loss_mean, loss_std, coherence, fading, outcome)

    def redraw_if_boundary(self, t: int) -> None:
        """Redraw every link's loss probability if slot ``t`` starts a fading block."""
        if t % self.coherence == 0:
            for i in range(self.n_links):
                x = self._fading[i].normal(self.loss_mean, self.loss_std)
                self._p[i] = min(max(x, 0.0), 1.0)

    def observe(self) -> np.ndarray:
        """Current per-link loss probabilities (copy)."""
        return self._p.copy()

    def transmit(self, i: int) -> int:
        """Outcome of a scheduled transmission on link ``i`` in the current block.

        Returns 1 (delivered) with probability ``1 - p_i``, else 0.
        """
        return 1 if self._outcome[i].random() >= self._p[i] else 0

    def draw_all(self) -> List[int]:
        """One outcome draw per link, in link order.

        Simulation runs call this every slot and use only the scheduled
        link's value, keeping all outcome streams slot-aligned.
        """
        return [self.transmit(i) for i in range(self.n_links)]
