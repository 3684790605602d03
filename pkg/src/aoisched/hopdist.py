"""Age distributions over tandem chains of lossy hops.

A packet crossing hop j is retransmitted until it gets through, so each hop
adds a geometric number of extra slots with parameter ``p_j``.  The total
age of an n-hop chain is the sum of n independent geometrics; its pmf is the
n-fold convolution

    Pr[age = d] = sum_{d'} Pr[age_{n-1} = d'] (1 - p_n) p_n^(d - d').

Closed forms are implemented for 1, 2 and 3 hops; they carry removable
singularities at equal loss probabilities, so nearly-equal chains must use
the convolution oracle instead.  This module is analytically standalone: the
simulator itself is single-hop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

# below this pairwise separation the closed forms lose too much precision
SEPARATION_GUARD = 1e-6


@dataclass(frozen=True)
class HopChain:
    """Loss probabilities of a tandem chain, one per hop, each in [0, 1)."""

    losses: Tuple[float, ...]

    def __init__(self, losses):
        object.__setattr__(self, "losses", tuple(float(p) for p in losses))
        if not self.losses:
            raise ValueError("chain needs at least one hop")
        for p in self.losses:
            if not 0.0 <= p < 1.0:
                raise ValueError(f"loss probabilities must lie in [0, 1), got {p}")

    @property
    def hops(self) -> int:
        return len(self.losses)

    def min_separation(self) -> float:
        ps = self.losses
        return min(
            (abs(ps[a] - ps[b]) for a in range(len(ps)) for b in range(a + 1, len(ps))),
            default=float("inf"),
        )


def pmf_closed(chain: HopChain, age: int) -> float:
    """Closed-form pmf of the chain age (1, 2 or 3 hops).

    Raises for longer chains and for chains whose loss probabilities are
    closer than ``SEPARATION_GUARD``; use :func:`pmf_oracle` there.
    """
    if age < 0:
        raise ValueError(f"age must be >= 0, got {age}")
    n = chain.hops
    if n > 3:
        raise ValueError("closed forms cover up to 3 hops; use pmf_oracle")
    if n >= 2 and chain.min_separation() < SEPARATION_GUARD:
        raise ValueError(
            "loss probabilities too close for the closed form; use pmf_oracle"
        )
    if n == 1:
        (p1,) = chain.losses
        return (1.0 - p1) * p1**age
    if n == 2:
        p1, p2 = chain.losses
        return (
            (1.0 - p1)
            * (1.0 - p2)
            * (p2 ** (age + 1) - p1 ** (age + 1))
            / (p2 - p1)
        )
    p1, p2, p3 = chain.losses
    prod = (1.0 - p1) * (1.0 - p2) * (1.0 - p3)
    total = 0.0
    for sign, pj in ((-1.0, p1), (1.0, p2)):
        total += sign * pj * (p3 ** (age + 1) - pj ** (age + 1)) / (p3 - pj)
    return prod / (p2 - p1) * total


def _geometric(p: float, max_age: int) -> np.ndarray:
    # scalar powers keep the one-hop oracle bit-identical to the closed form
    return np.array([(1.0 - p) * p**k for k in range(max_age + 1)])


def _pmf_series(chain: HopChain, max_age: int) -> np.ndarray:
    """pmf values for ages 0..max_age by hop-wise convolution."""
    acc = _geometric(chain.losses[0], max_age)
    for p in chain.losses[1:]:
        acc = np.convolve(acc, _geometric(p, max_age))[: max_age + 1]
    return acc


def pmf_oracle(chain: HopChain, age: int) -> float:
    """pmf of the chain age by explicit convolution; valid for any chain."""
    if age < 0:
        raise ValueError(f"age must be >= 0, got {age}")
    return float(_pmf_series(chain, age)[age])


def pmf(chain: HopChain, age: int) -> float:
    """Closed form where available and well-conditioned, oracle otherwise."""
    if chain.hops <= 3 and (chain.hops == 1 or chain.min_separation() >= SEPARATION_GUARD):
        return pmf_closed(chain, age)
    return pmf_oracle(chain, age)


def mean_age(chain: HopChain, tail_tol: float = 1e-12) -> float:
    """Mean chain age by truncated expectation.

    The series is extended until the analytic tail bound on the remaining
    expectation drops below ``tail_tol``.  (For independent hops the exact
    value is ``sum_j p_j / (1 - p_j)``, which tests use as the oracle.)
    """
    if tail_tol <= 0:
        raise ValueError("tail_tol must be > 0")
    p_max = max(chain.losses)
    if p_max == 0.0:
        return 0.0
    n = chain.hops
    scale = float(np.prod([1.0 - p for p in chain.losses]))

    def tail_bound(m: int) -> float:
        # pmf(d) <= C(d+n-1, n-1) * prod(1-p_j) * p_max^d; the bound terms
        # t(d) = d * C(d+n-1, n-1) * scale * p_max^d shrink geometrically
        # with ratio rho(d) = p_max * (d+n) / d once that is below 1
        d = m + 1
        rho = p_max * (d + n) / d
        if rho >= 1.0:
            return float("inf")
        comb = 1.0
        for j in range(1, n):
            comb *= (d + j) / j
        t_first = d * comb * scale * p_max**d
        return t_first / (1.0 - rho)

    size = 64
    while tail_bound(size) > tail_tol:
        size *= 2
        if size > 1 << 22:
            raise RuntimeError("tail bound does not shrink; loss probability too close to 1")
    series = _pmf_series(chain, size)
    return float(np.arange(size + 1) @ series)
