"""Per-run random substreams.

Run i of a batch with seed S draws from PCG64 seeded by
SeedSequence(S, spawn_key=(i,)), so any run can be reproduced alone and
batches split across workers give the same samples as a serial run.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

__all__ = ["run_generator"]

SEED_MAX = 2**64 - 1


def run_generator(seed: int, index: int) -> np.random.Generator:
    if not 0 <= int(seed) <= SEED_MAX:
        raise ParameterError("seed must be an integer in [0, 2^64)")
    if index < 0:
        raise ParameterError("run index must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))
