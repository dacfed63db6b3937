"""Counter-keyed random streams derived from one master seed.

Every consumer of randomness in a session gets its own generator, keyed by a
small integer tuple (purpose, index, ...).  Streams with different keys are
statistically independent, and the key fully determines the stream, so rounds
can be evaluated in any order (or concurrently) without changing results.
"""

import numpy as np

MAX_SEED = 2**64 - 1

# purpose ids for stream keys
ROUND = 0
SAMPLING = 1
EQUIVALENCE = 2
CONTROL = 3


class StreamFactory:
    """Expands a 64-bit master seed into independent keyed generators."""

    def __init__(self, seed: int):
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ValueError(f"seed must be an integer, got {seed!r}")
        if not 0 <= seed <= MAX_SEED:
            raise ValueError(f"seed must be in [0, 2^64), got {seed}")
        self.seed = seed

    def stream(self, *key: int) -> np.random.Generator:
        """Return the generator for a (purpose, index, ...) key."""
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=key)
        )

    def __repr__(self) -> str:
        return f"StreamFactory(seed={self.seed})"
