"""Seeded random streams.

Every stream is a Philox4x64 counter-based generator keyed from
``SeedSequence(seed, spawn_key=(stream,))``, so replicate ``k`` of an ensemble
is reproducible on its own, independent of how many other streams were drawn
or in which order.
"""
import numpy as np

ALGORITHM = "numpy.Philox4x64/SeedSequence(seed, spawn_key=(stream,))"

_TWO_POW_M52 = 2.0 ** -52


def generator(seed, stream=0):
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def open_uniforms(gen, size):
    """Uniforms on the open interval (0, 1): ``(k + 1/2) / 2**52`` for 52-bit ``k``.

    Both ends are excluded exactly, so the Pareto quantile never sees 0 or 1.
    """
    k = gen.integers(0, 2 ** 52, size=size, dtype=np.int64)
    return (k + 0.5) * _TWO_POW_M52
