"""Deterministic derivation of independent RNG streams from one master seed.

Every source of randomness gets its own stream, keyed by
``(repetition, purpose, index)`` through numpy's ``SeedSequence`` spawn
keys.  Streams therefore depend only on the master seed and their key:
changing the horizon or the policy never shifts the channel realization,
plant noise, or sampling offsets, which enables paired comparisons across
those settings (common random numbers).
"""

from __future__ import annotations

from numpy.random import PCG64, Generator, SeedSequence

# purpose codes
FADING = 0        # block-fading loss probability draws, one stream per link
OUTCOME = 1       # transmission success draws, one stream per link
PLANT_NOISE = 2   # process noise, one stream per sub-system
OFFSET = 3        # sampling offset draw, one stream per sub-system
POLICY = 4        # randomness consumed by stochastic baseline policies


def stream(master_seed: int, repetition: int, purpose: int, index: int = 0) -> Generator:
    """Independent generator for ``(repetition, purpose, index)``."""
    ss = SeedSequence(master_seed, spawn_key=(repetition, purpose, index))
    return Generator(PCG64(ss))
