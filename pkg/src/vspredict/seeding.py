"""Named sub-seeds derived from one base seed.

Each consumer (split, init, synth, ...) gets its own stream, so toggling
one method never shifts the random numbers another method sees.
"""

import zlib

import numpy as np


def derive_seed(seed: int, *names) -> int:
    key = [zlib.crc32(str(n).encode("utf-8")) for n in names]
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint32)[0])
