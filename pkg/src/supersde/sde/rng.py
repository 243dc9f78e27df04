"""Counter-based per-path random streams.

Every path owns an independent Philox4x64 stream. The 128-bit key is derived
from ``(master_seed, stream_id)`` through :class:`numpy.random.SeedSequence`
and the path index occupies the top 64-bit word of the 256-bit counter, so
path ``i`` always sees the same numbers no matter how paths are batched or
scheduled. Distinct ``stream_id`` values give independent experiments from one
master seed (the SDE and the Ornstein-Uhlenbeck runs use different ids).
"""

from __future__ import annotations

import numpy as np

STREAM_SDE = 1
STREAM_OU = 2
STREAM_SUPER = 3
STREAM_WONG_ZAKAI = 4
STREAM_REVERSAL = 5


def stream_key(master_seed: int, stream_id: int) -> np.ndarray:
    return np.random.SeedSequence([int(master_seed), int(stream_id)]).generate_state(2, np.uint64)


def path_generator(key: np.ndarray, path_index: int) -> np.random.Generator:
    counter = np.array([0, 0, 0, path_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def path_normals(master_seed: int, stream_id: int, path_index: int, size: int) -> np.ndarray:
    return path_generator(stream_key(master_seed, stream_id), path_index).standard_normal(size)


def block_normals(master_seed: int, stream_id: int, start: int, stop: int, size: int) -> np.ndarray:
    """Normals for paths ``start..stop-1`` as a time-major ``(size, n_paths)`` array."""
    key = stream_key(master_seed, stream_id)
    out = np.empty((stop - start, size))
    for row, idx in enumerate(range(start, stop)):
        out[row] = path_generator(key, idx).standard_normal(size)
    return np.ascontiguousarray(out.T)
