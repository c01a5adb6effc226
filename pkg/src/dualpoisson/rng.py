"""Seeded random streams.

Every simulation draws from its own child stream derived from a root seed:
``SeedSequence(seed, spawn_key=(index,))`` feeding a PCG64 generator.  The
same ``(seed, index)`` pair always yields the same uniforms, independent of
how many other streams were created or in which order.
"""

import numpy as np


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Return child stream ``index`` of root ``seed``."""
    if index < 0:
        raise ValueError("stream index must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
