"""Counter-based random streams for reproducible, order-independent sampling.

Every stochastic routine in the package draws from a Philox stream keyed by
(seed, domain, indices...).  Streams with distinct keys are statistically
independent, so work can be split over facets or sample chunks without any
shared-state hand-off, and a fixed seed reproduces every draw bit for bit.
"""

from __future__ import annotations

import numpy as np

# Samples are generated in fixed-size blocks keyed by block index.  The block
# size must never change: partial sums over the first k blocks are part of the
# reproducibility contract.
CHUNK = 4096

# Domain tags keep unrelated call sites on disjoint streams even when the
# caller reuses one seed.
DOMAIN_FACET = 0x66
DOMAIN_POINTS = 0x70
DOMAIN_BOUNDARY = 0x67


def stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for the given (seed, path) key.

    Philox is counter-based, so construction is cheap and the mapping from
    key to stream is stateless.
    """
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    key = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(key))


def gaussian_chunks(n: int, samples: int, seed: int, domain: int = DOMAIN_POINTS):
    """Yield standard-Gaussian blocks of shape (k, n), k <= CHUNK.

    Block c always generates a full CHUNK x n array and slices off the tail,
    so the first `samples` points are identical for any larger sample count
    with the same seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    done = 0
    chunk_index = 0
    while done < samples:
        block = stream(seed, domain, chunk_index).standard_normal((CHUNK, n))
        take = min(CHUNK, samples - done)
        yield block[:take]
        done += take
        chunk_index += 1
