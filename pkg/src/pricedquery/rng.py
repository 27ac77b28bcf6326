"""Named, counter-derived random streams.

Every random draw descends from one user seed. A stream is identified by a
name (``"inputs"``, ``"lottery"``, ``"influence"``, ...) and integer counters,
so results do not depend on the order in which streams are consumed.
"""

import hashlib
import zlib

import numpy as np


def stream(seed, name, *keys):
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())]
    entropy.extend(int(k) for k in keys)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def restriction_key(alpha):
    """Stable non-negative integer identifying a restriction."""
    digest = hashlib.blake2b(repr(tuple(alpha)).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")
