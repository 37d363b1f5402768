"""Deterministic substream management.

Every random draw in the package comes from a Philox (counter-based)
generator keyed by (master seed, cell id, trial id, role).  Streams with
different keys are independent, so trials and sweep cells can run in any
order or on any number of workers without changing results.
"""

from __future__ import annotations

import numpy as np

# Role tags for the independent streams used inside one trial.
ROLE_CODEBOOK = 0
ROLE_NOISE = 1


def substream(master_seed: int, cell: int = 0, trial: int = 0, role: int = 0) -> np.random.Generator:
    """Return the generator for a (seed, cell, trial, role) key."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(cell), int(trial), int(role)))
    return np.random.Generator(np.random.Philox(seq))
