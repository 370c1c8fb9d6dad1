"""Deterministic RNG stream derivation.

Every randomized routine derives an independent stream per work unit from
``(seed..., index)``, so results never depend on execution order or on how
work is split across processes.
"""

import numpy as np


def seed_tuple(seed):
    """Normalize an int or a sequence of ints into a tuple of ints."""
    if isinstance(seed, (tuple, list)):
        out = tuple(int(s) for s in seed)
    else:
        out = (int(seed),)
    if any(s < 0 for s in out):
        raise ValueError("seed components must be non-negative")
    return out


def stream(seed, *indices):
    """A fresh Generator for the work unit addressed by ``indices``."""
    return np.random.default_rng(seed_tuple(seed) + tuple(int(i) for i in indices))
