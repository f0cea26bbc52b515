"""Counter-based random streams for reproducible, order-independent Monte Carlo.

Every stream is a Philox generator whose 128-bit key combines the user's
64-bit master seed with a domain tag, and whose 256-bit counter embeds up to
two path indices in the high words:

    key     = (seed << 64) | domain
    counter = (index_a << 192) + (index_b << 128)

The low 128 counter bits are left for the stream's own draws, so any draw is
a pure function of (seed, domain, index_a, index_b, position).  Trials can be
generated in blocks, in any order, on any number of workers, and the numbers
never change.
"""

from __future__ import annotations

import numpy as np

DOMAIN_LAYOUTS = 1
DOMAIN_OUTAGE = 2
DOMAIN_TESTS = 3

_U64 = 1 << 64


def stream(seed: int, domain: int, index_a: int = 0, index_b: int = 0) -> np.random.Generator:
    """Generator for one (seed, domain, index_a, index_b) cell."""
    if not (0 <= seed < _U64):
        raise ValueError(f"seed must fit in 64 bits, got {seed!r}")
    if not (0 <= domain < _U64):
        raise ValueError(f"domain must fit in 64 bits, got {domain!r}")
    if index_a < 0 or index_b < 0:
        raise ValueError("stream indices must be nonnegative")
    key = (seed << 64) | domain
    counter = (index_a << 192) + (index_b << 128)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
