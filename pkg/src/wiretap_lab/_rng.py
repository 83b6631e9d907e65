"""Counter-based random streams.

Every block of randomness is addressed by ``(seed, stream, index)`` so the
numbers a task draws never depend on how work was scheduled.
"""
import numpy as np

CHUNK = 4096


def generator(seed, stream=0, index=0):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.Philox(ss))


def bernoulli_bits(p, count, seed, stream=0):
    """``count`` Bernoulli(p) bits, drawn chunk by chunk from independent streams."""
    out = np.empty(count, dtype=np.uint8)
    for index, start in enumerate(range(0, count, CHUNK)):
        stop = min(start + CHUNK, count)
        rng = generator(seed, stream, index)
        out[start:stop] = rng.random(stop - start) < p
    return out
